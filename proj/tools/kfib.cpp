// kfib: group-cohomological obstruction toolkit for fibred Kahler and
// quasi-projective groups. One subcommand per question; verdict polarity
// lives in the report body, never in the exit code (0 = computed,
// 1 = invalid input, 2 = resource cap).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kfib/cohomology.hpp"
#include "kfib/fibration.hpp"
#include "kfib/homomorphism.hpp"
#include "kfib/int_matrix.hpp"
#include "kfib/monodromy.hpp"
#include "kfib/ninf.hpp"
#include "kfib/presentation.hpp"
#include "kfib/report.hpp"
#include "kfib/smith.hpp"
#include "kfib/stallings.hpp"
#include "kfib/word.hpp"

namespace {

using kfib::Int;
using kfib::IntMatrix;
using kfib::IntVec;
using kfib::Json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json int_json(const Int& v) {
  if (v.fits_slong_p()) {
    long x = v.get_si();
    if (x < (1L << 53) && x > -(1L << 53)) return x;
  }
  return v.get_str();
}

Json vec_json(const IntVec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(int_json(x));
  return a;
}

Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i)));
  return rows;
}

Json rat_json(const kfib::Rat& r) {
  if (r.get_den() == 1) return int_json(Int(r.get_num()));
  return r.get_str();
}

Json rat_matrix_json(const kfib::RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json torsion_json(const std::vector<Int>& t) {
  Json a = Json::array();
  for (const Int& x : t) a.push_back(int_json(x));
  return a;
}

std::vector<kfib::Word> parse_word_list(const std::string& text,
                                        std::size_t rank) {
  std::vector<kfib::Word> words;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    if (cur == "1") cur.clear();  // explicit identity
    words.push_back(kfib::parse_word(cur, rank));
  }
  return words;
}

struct Invocation {
  std::vector<std::string> args;
  bool json = false;

  kfib::Report report(const std::string& command,
                      const std::vector<std::string>& file_contents) const {
    kfib::Digest d;
    for (const auto& a : args) d.feed(a);
    for (const auto& c : file_contents) d.feed(c);
    return kfib::Report(command, d.hex());
  }

  // Reports are only emitted for computed results; the status field echoes
  // the process exit code for pipelines that archive reports without it.
  int emit(kfib::Report r) const {
    r.field("exit", 0);
    if (json)
      r.print_json(std::cout);
    else
      r.print_text(std::cout);
    return 0;
  }
};

int run_abel(const Invocation& inv, const std::string& pres_path) {
  std::string text = read_file(pres_path);
  kfib::Presentation p = kfib::parse_presentation(text);
  auto ab = kfib::abelianization(p);
  auto rep = inv.report("abel", {text});
  rep.field("generators", p.rank());
  rep.field("relators", p.relators().size());
  rep.field("free-rank", ab.free_rank);
  rep.field("torsion", torsion_json(ab.torsion));
  return inv.emit(rep);
}

int run_h1(const Invocation& inv, const std::string& pres_path,
           const std::string& module_path) {
  std::string text = read_file(pres_path);
  kfib::Presentation p = kfib::parse_presentation(text);
  if (module_path.empty()) {
    IntMatrix basis = kfib::h1_basis(p);
    auto rep = inv.report("h1", {text});
    rep.field("generators", p.rank());
    rep.field("h1-rank", basis.rows());
    rep.field("basis", matrix_json(basis));
    return inv.emit(rep);
  }
  std::string mtext = read_file(module_path);
  kfib::PiModule mod = kfib::parse_module(mtext);
  if (mod.actions.size() != p.rank())
    throw std::invalid_argument(
        "h1: module must have one generator matrix per presentation generator");
  auto tw = kfib::twisted_h1(p, mod.actions);
  auto rep = inv.report("h1", {text, mtext});
  rep.field("generators", p.rank());
  rep.field("module-dim", mod.dim);
  rep.field("free-rank", tw.free_rank);
  rep.field("torsion", torsion_json(tw.torsion));
  rep.field("cocycle-rank", tw.cocycle_rank);
  Json cocycles = Json::array();
  for (const auto& c : tw.cocycle_basis) {
    Json per_gen = Json::array();
    for (const auto& v : c) per_gen.push_back(vec_json(v));
    cocycles.push_back(per_gen);
  }
  rep.field("cocycle-basis", cocycles);
  return inv.emit(rep);
}

int run_cup(const Invocation& inv, const std::string& pres_path,
            bool declared_aspherical) {
  std::string text = read_file(pres_path);
  kfib::Presentation p = kfib::parse_presentation(text);
  std::string family;
  if (p.is_free())
    family = "free";
  else if (kfib::is_surface_presentation(p))
    family = "surface";
  else if (declared_aspherical)
    family = "declared";
  else
    throw std::invalid_argument(
        "cup: presentation is neither free nor a standard surface "
        "presentation; pass --aspherical to declare asphericity");
  kfib::SkewForm form = kfib::cup_form(p, true);
  auto rep = inv.report("cup", {text});
  rep.field("family", family);
  rep.field("h1-rank", form.size());
  rep.field("form", matrix_json(form.matrix));
  rep.field("form-rank", form.rank());
  return inv.emit(rep);
}

int run_isotropic(const Invocation& inv, const std::string& form_path,
                  const std::string& subspace_path) {
  std::string ftext = read_file(form_path);
  std::string stext = read_file(subspace_path);
  kfib::SkewForm form(IntMatrix::parse(ftext));
  IntMatrix v = IntMatrix::parse(stext);
  auto rep = inv.report("isotropic", {ftext, stext});
  rep.field("form-size", form.size());
  rep.field("form-rank", form.rank());
  rep.field("subspace-rows", v.rows());
  rep.field("subspace-dim", kfib::rational_rank(v));
  rep.field("isotropic", kfib::is_isotropic(form, v));
  rep.field("maximal-isotropic", kfib::is_maximal_isotropic(form, v));
  return inv.emit(rep);
}

int run_orb(const Invocation& inv, long genus, bool open_base,
            const std::string& mults_text) {
  std::vector<long> mults;
  if (!mults_text.empty()) {
    std::istringstream in(mults_text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        mults.push_back(std::stol(tok));
      } catch (...) {
        throw std::invalid_argument("orb: bad multiplicity '" + tok + "'");
      }
    }
  }
  if (genus < 0) throw std::invalid_argument("orb: genus must be >= 0");
  kfib::OrbifoldSpec spec(static_cast<std::size_t>(genus), open_base, mults);
  kfib::Presentation p = kfib::orbifold_presentation(spec);
  auto ab = kfib::abelianization(p);
  auto rep = inv.report("orb", {});
  rep.field("base", open_base ? "open" : "compact");
  rep.field("genus", genus);
  Json marr = Json::array();
  for (long m : mults) marr.push_back(m);
  rep.field("multiplicities", marr);
  rep.field("generators", p.rank());
  Json rels = Json::array();
  for (const auto& r : p.relators()) rels.push_back(kfib::word_to_string(r));
  rep.field("relator-words", rels);
  rep.field("free-rank", ab.free_rank);
  rep.field("torsion", torsion_json(ab.torsion));
  rep.field("kernel-finitely-generated", kfib::kernel_finitely_generated(spec));
  for (const auto& n : kfib::orbifold_notes(spec)) rep.note(n);
  return inv.emit(rep);
}

int run_euler(const Invocation& inv, bool compact, bool open_base, long e,
              long g, long r) {
  if (compact == open_base)
    throw std::invalid_argument("euler: pass exactly one of --compact, --open");
  kfib::EulerVerdict v = compact ? kfib::euler_check_compact(e, g, r)
                                 : kfib::euler_check_open(e, g, r);
  auto rep = inv.report("euler", {});
  rep.field("mode", compact ? "compact" : "open");
  rep.field("e", e);
  rep.field("g", g);
  rep.field("r", r);
  rep.field("matches", v.matches);
  Json sols = Json::array();
  for (const auto& s : v.solutions)
    sols.push_back(Json::array({s.fibre_genus, s.slack}));
  rep.field("solutions", sols);
  rep.field("forced", v.forced);
  for (const auto& n : v.notes) rep.note(n);
  return inv.emit(rep);
}

int run_ends(const Invocation& inv, long rank,
             const std::vector<std::string>& end_specs) {
  if (rank < 1) throw std::invalid_argument("ends: need --rank >= 1");
  std::vector<kfib::EndDescriptor> ends;
  for (const std::string& spec : end_specs) {
    kfib::EndDescriptor end;
    std::string images = spec;
    auto semi = spec.find(';');
    if (semi != std::string::npos) {
      images = spec.substr(0, semi);
      std::string rest = spec.substr(semi + 1);
      if (rest.rfind("simple=", 0) != 0)
        throw std::invalid_argument("ends: expected ';simple=...' in end spec");
      end.simple_images =
          parse_word_list(rest.substr(7), static_cast<std::size_t>(rank));
    }
    end.images = parse_word_list(images, static_cast<std::size_t>(rank));
    ends.push_back(std::move(end));
  }
  auto v = kfib::ends_condition(static_cast<std::size_t>(rank), ends);
  auto rep = inv.report("ends", {});
  rep.field("rank", rank);
  rep.field("ends", ends.size());
  Json arr = Json::array();
  for (const auto& ev : v.per_end) {
    Json j;
    j["subgroup-rank"] = ev.subgroup_rank;
    j["cyclic"] = ev.cyclic;
    j["simple-nontrivial"] = ev.simple_nontrivial;
    j["pass"] = ev.pass;
    arr.push_back(j);
  }
  rep.field("per-end", arr);
  rep.field("all-pass", v.all_pass);
  return inv.emit(rep);
}

int run_stallings(const Invocation& inv, long rank,
                  const std::string& words_text) {
  if (rank < 1) throw std::invalid_argument("stallings: need --rank >= 1");
  auto words = parse_word_list(words_text, static_cast<std::size_t>(rank));
  auto g = kfib::SubgroupGraph::fold(words, static_cast<std::size_t>(rank));
  auto ir = kfib::index_and_rank(g);
  auto rep = inv.report("stallings", {});
  rep.field("ambient-rank", rank);
  rep.field("generators", words.size());
  rep.field("vertices", g.vertex_count());
  rep.field("edges", g.edge_count());
  if (ir.index)
    rep.field("index", *ir.index);
  else
    rep.field("index", "infinite");
  rep.field("rank", ir.rank);
  rep.field("surjective", ir.index.has_value() && *ir.index == 1);
  return inv.emit(rep);
}

int run_ninf(const Invocation& inv, const std::string& oracle_path, long radius,
             long cycles, long max_vertices) {
  std::string text = read_file(oracle_path);
  kfib::GroupOracle oracle = kfib::parse_oracle(text);
  if (cycles < 0) throw std::invalid_argument("ninf: need --cycles >= 0");
  auto witness =
      kfib::ninf_witness(oracle, radius, static_cast<std::size_t>(cycles),
                         static_cast<std::size_t>(max_vertices));
  auto rep = inv.report("ninf", {text});
  rep.field("family",
            oracle.family() == kfib::GroupOracle::Family::zk ? "zk" : "mat");
  rep.field("source-rank", oracle.rank());
  rep.field("radius", radius);
  rep.field("requested-cycles", cycles);
  if (!witness) {
    rep.field("witness-found", false);
    rep.note("no kernel word of length <= 2R inside the fragment; the "
             "quotient map may be injective at this radius");
    return inv.emit(rep);
  }
  rep.field("witness-found", true);
  rep.field("cycle", kfib::word_to_string(witness->cycle));
  rep.field("cycle-length", witness->cycle.size());
  Json supp = Json::array();
  for (const auto& x : witness->support) supp.push_back(vec_json(x));
  rep.field("support", supp);
  Json trans = Json::array();
  for (const auto& h : witness->translates) trans.push_back(vec_json(h));
  rep.field("translates", trans);
  rep.field("rank-bound", witness->rank_bound);
  rep.field("requested-met", witness->requested_met);
  if (!witness->diagnostic.empty()) rep.note(witness->diagnostic);
  return inv.emit(rep);
}

int run_obstruct(const Invocation& inv, const std::string& group_text,
                 const std::string& module_path) {
  kfib::PiSpec spec = kfib::parse_pi_spec(group_text);
  std::string mtext = read_file(module_path);
  kfib::PiModule mod = kfib::parse_module(mtext);
  mod.validate(spec);
  kfib::KahlerVerdict v = kfib::kahler_verdict(spec, mod);
  auto rep = inv.report("obstruct", {mtext});
  rep.field("group", spec.name());
  rep.field("module-dim", mod.dim);
  rep.field("invariant-rank", v.invariant_rank);
  rep.field("degenerate-rank", v.degenerate_rank);
  rep.field("obstructed", v.obstructed);
  if (v.witness) {
    rep.field("witness-u", vec_json(v.witness->u));
    Json vs = Json::array();
    for (const auto& w : v.witness->vs) vs.push_back(vec_json(w));
    rep.field("witness-vs", vs);
  }
  rep.field("splitting-found", v.splitting.has_value());
  if (v.splitting) rep.field("splitting", rat_matrix_json(*v.splitting));
  for (const auto& n : v.notes) rep.note(n);
  return inv.emit(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kfib: obstruction toolkit for fibred Kahler and "
               "quasi-projective groups"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Invocation inv;
  for (int i = 1; i < argc; ++i) inv.args.emplace_back(argv[i]);

  // abel
  auto* abel = app.add_subcommand("abel", "abelian invariants of a presentation");
  std::string abel_pres;
  abel->add_option("--pres", abel_pres, "presentation file")->required();
  abel->add_flag("--json", inv.json, "machine-readable output");

  // h1
  auto* h1 = app.add_subcommand("h1", "H^1 with trivial or module coefficients");
  std::string h1_pres, h1_module;
  h1->add_option("--pres", h1_pres, "presentation file")->required();
  h1->add_option("--module", h1_module, "module file (twisted coefficients)");
  h1->add_flag("--json", inv.json, "machine-readable output");

  // cup
  auto* cup = app.add_subcommand("cup", "cup product form of an aspherical presentation");
  std::string cup_pres;
  bool cup_aspherical = false;
  cup->add_option("--pres", cup_pres, "presentation file")->required();
  cup->add_flag("--aspherical", cup_aspherical,
                "declare a non-standard presentation aspherical");
  cup->add_flag("--json", inv.json, "machine-readable output");

  // isotropic
  auto* iso = app.add_subcommand("isotropic", "isotropy of a subspace under a skew form");
  std::string iso_form, iso_sub;
  iso->add_option("--form", iso_form, "skew form matrix file")->required();
  iso->add_option("--subspace", iso_sub, "subspace basis matrix file (rows)")
      ->required();
  iso->add_flag("--json", inv.json, "machine-readable output");

  // orb
  auto* orb = app.add_subcommand("orb", "orbifold fundamental group of a fibration base");
  long orb_genus = 0;
  bool orb_open = false;
  std::string orb_mults;
  orb->add_option("--genus", orb_genus, "base genus (compact) or type (open)")
      ->required();
  orb->add_flag("--open", orb_open, "open base (free fundamental group)");
  orb->add_option("--mults", orb_mults, "comma-separated multiplicities");
  orb->add_flag("--json", inv.json, "machine-readable output");

  // euler
  auto* euler = app.add_subcommand("euler", "Euler-characteristic fibration criterion");
  bool euler_compact = false, euler_open = false;
  long euler_e = 0, euler_g = 0, euler_r = 0;
  euler->add_flag("--compact", euler_compact, "compact surface criterion");
  euler->add_flag("--open", euler_open, "open surface criterion");
  euler->add_option("--e", euler_e, "Euler characteristic")->required();
  euler->add_option("--g", euler_g, "base genus / rank")->required();
  euler->add_option("--r", euler_r, "fibre genus")->required();
  euler->add_flag("--json", inv.json, "machine-readable output");

  // ends
  auto* ends = app.add_subcommand("ends", "end conditions for open fibrations");
  long ends_rank = 0;
  std::vector<std::string> ends_specs;
  ends->add_option("--rank", ends_rank, "rank of the free target")->required();
  ends->add_option("--end", ends_specs,
                   "end spec 'w1,w2;simple=w1' (repeatable)")
      ->required();
  ends->add_flag("--json", inv.json, "machine-readable output");

  // stallings
  auto* sta = app.add_subcommand("stallings", "folded subgroup graph of a free group");
  long sta_rank = 0;
  std::string sta_words;
  sta->add_option("--rank", sta_rank, "ambient free rank")->required();
  sta->add_option("--words", sta_words, "comma-separated subgroup generators")
      ->required();
  sta->add_flag("--json", inv.json, "machine-readable output");

  // ninf
  auto* ninf = app.add_subcommand("ninf", "Cayley-fragment homology-rank witness");
  std::string ninf_oracle;
  long ninf_radius = 0, ninf_cycles = 0, ninf_cap = 1000000;
  ninf->add_option("--oracle", ninf_oracle, "oracle file")->required();
  ninf->add_option("--radius", ninf_radius, "exploration radius")->required();
  ninf->add_option("--cycles", ninf_cycles, "requested disjoint translates")
      ->required();
  ninf->add_option("--max-vertices", ninf_cap, "resource cap (default 1000000)");
  ninf->add_flag("--json", inv.json, "machine-readable output");

  // obstruct
  auto* obs = app.add_subcommand("obstruct", "monodromy obstruction verdict");
  std::string obs_group, obs_module;
  obs->add_option("--group", obs_group, "surface:g or free:g")->required();
  obs->add_option("--module", obs_module, "module file")->required();
  obs->add_flag("--json", inv.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*abel) return run_abel(inv, abel_pres);
    if (*h1) return run_h1(inv, h1_pres, h1_module);
    if (*cup) return run_cup(inv, cup_pres, cup_aspherical);
    if (*iso) return run_isotropic(inv, iso_form, iso_sub);
    if (*orb) return run_orb(inv, orb_genus, orb_open, orb_mults);
    if (*euler)
      return run_euler(inv, euler_compact, euler_open, euler_e, euler_g,
                       euler_r);
    if (*ends) return run_ends(inv, ends_rank, ends_specs);
    if (*sta) return run_stallings(inv, sta_rank, sta_words);
    if (*ninf)
      return run_ninf(inv, ninf_oracle, ninf_radius, ninf_cycles, ninf_cap);
    if (*obs) return run_obstruct(inv, obs_group, obs_module);
  } catch (const kfib::resource_error& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
