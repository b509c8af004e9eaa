#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kfib {

using Json = nlohmann::ordered_json;

/// Structured result of one CLI invocation. The JSON rendering carries
/// exactly the fields of the text rendering (plus nothing less), and both
/// are deterministic functions of the inputs, so batch runs can be diffed.
class Report {
 public:
  Report(std::string command, std::string digest)
      : command_(std::move(command)), digest_(std::move(digest)) {}

  void field(const std::string& key, Json value) {
    fields_.emplace_back(key, std::move(value));
  }

  void note(const std::string& text) { notes_.push_back(text); }

  const std::vector<std::pair<std::string, Json>>& fields() const {
    return fields_;
  }
  const std::vector<std::string>& notes() const { return notes_; }

  static std::string render_value(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  void print_text(std::ostream& out) const {
    out << "command: " << command_ << '\n';
    out << "inputs-digest: " << digest_ << '\n';
    for (const auto& [k, v] : fields_) out << k << ": " << render_value(v) << '\n';
    for (const auto& n : notes_) out << "note: " << n << '\n';
  }

  Json to_json() const {
    Json j;
    j["command"] = command_;
    j["inputs-digest"] = digest_;
    for (const auto& [k, v] : fields_) j[k] = v;
    j["notes"] = notes_;
    return j;
  }

  void print_json(std::ostream& out) const { out << to_json().dump(2) << '\n'; }

 private:
  std::string command_;
  std::string digest_;
  std::vector<std::pair<std::string, Json>> fields_;
  std::vector<std::string> notes_;
};

/// FNV-1a over the raw argument strings and input file bytes; enough to tag
/// a report with what produced it.
class Digest {
 public:
  void feed(const std::string& bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    state_ ^= 0xff;  // separator
    state_ *= 0x100000001b3ULL;
  }

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    std::uint64_t v = state_;
    for (int i = 15; i >= 0; --i) {
      s[i] = digits[v & 0xf];
      v >>= 4;
    }
    return s;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace kfib
