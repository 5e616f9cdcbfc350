#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "finloc/export_dot.hpp"
#include "finloc/fixtures.hpp"
#include "finloc/homs.hpp"
#include "finloc/json_io.hpp"
#include "finloc/suite.hpp"

namespace {

using finloc::json;

constexpr int kExitLawFailure = 1;
constexpr int kExitBadInput = 2;

struct Options {
  std::string format = "text";
  bool want_json() const { return format == "json"; }
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw finloc::ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw finloc::ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

// A <file> argument is either a path to a JSON file or "fixture:NAME".
std::optional<finloc::FixtureEntry> fixture_arg(const std::string& arg) {
  if (arg.rfind("fixture:", 0) != 0) return std::nullopt;
  auto map = finloc::fixture_map();
  auto it = map.find(arg.substr(8));
  if (it == map.end()) throw finloc::ParseError("unknown fixture " + arg.substr(8));
  return it->second;
}

finloc::Lattice load_lattice(const std::string& arg) {
  if (auto fx = fixture_arg(arg)) {
    if (auto* l = std::get_if<finloc::Lattice>(&fx->value)) return *l;
    throw finloc::ParseError(arg + " is a module fixture, not a frame");
  }
  return finloc::parse_lattice(load_json_file(arg));
}

finloc::BModule load_module(const std::string& arg) {
  if (auto fx = fixture_arg(arg)) {
    if (auto* m = std::get_if<finloc::BModule>(&fx->value)) return *m;
    throw finloc::ParseError(arg + " is a frame fixture, not a module");
  }
  return finloc::parse_module(load_json_file(arg));
}

void print_report(const finloc::LawReport& rep, const Options& opt) {
  if (opt.want_json())
    std::cout << finloc::law_report_to_json(rep).dump(2) << "\n";
  else
    std::cout << rep.to_text();
}

int report_exit(const finloc::LawReport& rep) {
  return rep.all_pass() ? 0 : kExitLawFailure;
}

int cmd_frame_check(const std::string& file, const Options& opt) {
  finloc::Lattice l = load_lattice(file);
  finloc::LawReport rep = verify_frame(l);
  print_report(rep, opt);
  return report_exit(rep);
}

int cmd_module_check(const std::string& file, const Options& opt) {
  finloc::BModule m = load_module(file);
  finloc::LawReport rep;
  rep.subject = "module";
  rep.merge(m.module_laws());
  rep.merge(m.stability_report());
  rep.add(m.carrier_is_frame()
              ? finloc::LawCheck::ok("carrier-frame-laws")
              : finloc::LawCheck::fail("carrier-frame-laws", "carrier fails verify_frame"));
  const int law_exit = report_exit(rep);
  if (opt.want_json()) {
    json out = finloc::law_report_to_json(rep);
    out["blocale"] = m.is_blocale();
    out["open"] = m.is_open();
    out["etale"] = m.is_open() && m.is_etale();
    out["support_laws"] = finloc::law_report_to_json(m.support_laws());
    std::cout << out.dump(2) << "\n";
  } else {
    print_report(rep, opt);
    std::cout << m.support_laws().to_text();
    std::cout << "blocale: " << (m.is_blocale() ? "yes" : "no") << "\n";
    std::cout << "open: " << (m.is_open() ? "yes" : "no") << "\n";
    std::cout << "etale: " << (m.is_open() && m.is_etale() ? "yes" : "no") << "\n";
  }
  return law_exit;
}

int cmd_module_sections(const std::string& file, const Options& opt) {
  finloc::BModule m = load_module(file);
  m.require_open();  // NotOpen surfaces as bad input
  json out;
  out["sections"] = m.sections();
  json supports = json::array();
  for (int s : m.sections()) supports.push_back(m.spp(s));
  out["supports"] = std::move(supports);
  if (m.is_etale()) {
    finloc::SectionsPresheaf sp = finloc::sections_presheaf(m);
    json fibers = json::object();
    for (int b = 0; b < m.base().size(); ++b) {
      json names = json::array();
      for (int s : sp.fibers[b]) names.push_back(m.carrier().name(s));
      fibers[m.base().name(b)] = std::move(names);
    }
    out["presheaf"] = std::move(fibers);
    out["presheaf_laws"] = finloc::law_report_to_json(sp.laws);
  }
  if (opt.want_json()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "sections:";
    for (int s : m.sections())
      std::cout << " " << m.carrier().name(s) << " (spp=" << m.base().name(m.spp(s)) << ")";
    std::cout << "\n";
    if (m.is_etale()) {
      std::cout << "presheaf fibers:\n";
      finloc::SectionsPresheaf sp = finloc::sections_presheaf(m);
      for (int b = 0; b < m.base().size(); ++b) {
        std::cout << "  " << m.base().name(b) << ":";
        for (int s : sp.fibers[b]) std::cout << " " << m.carrier().name(s);
        std::cout << "\n";
      }
    } else {
      std::cout << "not etale: no sections presheaf\n";
    }
  }
  return 0;
}

int cmd_hilbert_check(const std::string& file, const Options& opt) {
  finloc::HilbertModule h = fixture_arg(file)
                                ? finloc::hilbert_from_support(load_module(file))
                                : finloc::parse_hilbert(load_json_file(file));
  if (opt.want_json()) {
    json out = finloc::law_report_to_json(h.axioms);
    out["nondegenerate"] = h.flags.nondegenerate;
    out["strict"] = h.flags.strict;
    out["supported"] = h.flags.supported;
    out["weakly_nondegenerate"] = h.flags.weakly_nondegenerate;
    out["inner"] = finloc::inner_to_json(h.inner);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << h.axioms.to_text();
    std::cout << "nondegenerate: " << (h.flags.nondegenerate ? "yes" : "no");
    if (!h.flags.nondegenerate) std::cout << "  (" << h.flags.nondegenerate_witness << ")";
    std::cout << "\nstrict: " << (h.flags.strict ? "yes" : "no");
    std::cout << "\nsupported: " << (h.flags.supported ? "yes" : "no");
    std::cout << "\nweakly nondegenerate: " << (h.flags.weakly_nondegenerate ? "yes" : "no")
              << "\n";
  }
  return report_exit(h.axioms);
}

int cmd_hilbert_basis(const std::string& file, const std::string& subset, const Options& opt) {
  finloc::HilbertModule h = fixture_arg(file)
                                ? finloc::hilbert_from_support(load_module(file))
                                : finloc::parse_hilbert(load_json_file(file));
  std::vector<int> family;
  std::stringstream ss(subset);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    try {
      family.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw finloc::ParseError("subset entries are element indices: " + tok);
    }
  }
  std::string witness;
  const bool basis = finloc::is_hilbert_basis(h.inner, family, &witness);
  if (!basis) {
    if (opt.want_json()) {
      json out;
      out["is_hilbert_basis"] = false;
      out["witness"] = witness;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "is_hilbert_basis: no  (" << witness << ")\n";
    }
    return kExitLawFailure;
  }
  finloc::LawReport rep = finloc::basis_properties(h.inner, family);
  if (opt.want_json()) {
    json out;
    out["is_hilbert_basis"] = true;
    out["properties"] = finloc::law_report_to_json(rep);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "is_hilbert_basis: yes\n" << rep.to_text();
  }
  return report_exit(rep);
}

int cmd_matrix_to_module(const std::string& file, const Options& opt) {
  finloc::BMatrix m = finloc::parse_matrix(load_json_file(file));
  finloc::MatrixModule mm = finloc::module_from_matrix(m);
  finloc::BMatrix back = finloc::matrix_from_module(mm.inner, mm.columns);
  finloc::LawReport rep = mm.laws;
  rep.add(back.entries == m.entries
              ? finloc::LawCheck::ok("round-trip-exact")
              : finloc::LawCheck::fail("round-trip-exact", "Gram of columns differs"));
  if (opt.want_json()) {
    json out;
    out["module"] = finloc::module_to_json(mm.mod);
    out["columns"] = mm.columns;
    out["inner"] = finloc::inner_to_json(mm.inner);
    out["laws"] = finloc::law_report_to_json(rep);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << rep.to_text();
    std::cout << "carrier size: " << mm.mod.carrier().size() << "\n";
    std::cout << "columns:";
    for (int c : mm.columns) std::cout << " " << mm.mod.carrier().name(c);
    std::cout << "\n";
  }
  return report_exit(rep);
}

int cmd_module_to_matrix(const std::string& file, const Options& opt) {
  finloc::BModule m = load_module(file);
  m.require_etale();
  finloc::InnerProduct ip = finloc::inner_from_support(m);
  finloc::BMatrix gram = finloc::matrix_from_module(ip, m.sections());
  finloc::MatrixModule mm = finloc::module_from_matrix(gram);
  finloc::LawReport rep = mm.laws;
  {
    finloc::BMatrix back = finloc::matrix_from_module(mm.inner, mm.columns);
    rep.add(back.entries == gram.entries
                ? finloc::LawCheck::ok("round-trip-exact")
                : finloc::LawCheck::fail("round-trip-exact", "Gram of columns differs"));
    finloc::CanonicalIso iso = finloc::canonical_iso(mm, ip, m.sections());
    rep.merge(iso.laws);
  }
  if (opt.want_json()) {
    json out;
    out["matrix"] = finloc::matrix_to_json(gram);
    out["laws"] = finloc::law_report_to_json(rep);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << rep.to_text();
    std::cout << "matrix " << gram.rows << "x" << gram.cols << " over "
              << m.base().size() << "-element base\n";
  }
  return report_exit(rep);
}

int cmd_hom_adjoint(const std::string& file, const Options& opt) {
  finloc::ModuleHom h = finloc::parse_hom(load_json_file(file));
  h.src.require_etale();
  h.tgt.require_etale();
  finloc::InnerProduct ipx = finloc::inner_from_support(h.src);
  finloc::InnerProduct ipy = finloc::inner_from_support(h.tgt);
  finloc::AdjointResult r = finloc::adjoint(h, ipx, ipy, h.src.sections());
  if (opt.want_json()) {
    json out;
    out["dagger"] = r.dagger.table;
    out["laws"] = finloc::law_report_to_json(r.laws);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "dagger:";
    for (int v : r.dagger.table) std::cout << " " << v;
    std::cout << "\n" << r.laws.to_text();
  }
  return report_exit(r.laws);
}

int cmd_hom_check(const std::string& file, const Options& opt) {
  finloc::ModuleHom h = finloc::parse_hom(load_json_file(file));
  finloc::LawReport rep = finloc::check_module_hom(h);
  json out = finloc::law_report_to_json(rep);
  bool etale = h.src.is_open() && h.src.is_etale() && h.tgt.is_open() && h.tgt.is_etale();
  if (etale) {
    finloc::SheafHomVerdict sv = finloc::is_sheaf_hom(h);
    out["sheaf_hom"] = sv.pass;
    out["sheaf_laws"] = finloc::law_report_to_json(sv.laws);
    finloc::InnerProduct ipx = finloc::inner_from_support(h.src);
    finloc::InnerProduct ipy = finloc::inner_from_support(h.tgt);
    finloc::AdjointableVerdict av = finloc::is_adjointable_iff_hom_check(h, ipx, ipy);
    out["adjointable"] = av.adjointable;
    out["adjointable_iff_hom"] = av.agree;
    if (opt.want_json()) {
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << rep.to_text();
      std::cout << "sheaf hom: " << (sv.pass ? "yes" : "no") << "\n";
      std::cout << "adjointable: " << (av.adjointable ? "yes" : "no")
                << "  (agrees with hom verdict: " << (av.agree ? "yes" : "no") << ")\n";
    }
    return rep.all_pass() && av.agree ? 0 : kExitLawFailure;
  }
  if (opt.want_json())
    std::cout << out.dump(2) << "\n";
  else
    std::cout << rep.to_text();
  return report_exit(rep);
}

int cmd_map_dagger_check(const std::string& file, const Options& opt) {
  finloc::BLocaleMap f = finloc::parse_map(load_json_file(file));
  finloc::LawReport rep = finloc::check_dagger_is_direct_image(f);
  rep.merge(finloc::check_frobenius(f));
  print_report(rep, opt);
  return report_exit(rep);
}

int cmd_suite_run(uint64_t seed, int count, int max_size, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  finloc::SuiteOutcome outcome = finloc::run_suite(seed, count, max_size);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            start);
  if (opt.want_json())
    std::cout << outcome.to_json().dump(2) << "\n";
  else
    std::cout << outcome.to_text();
  // Timing goes to stderr: reports on stdout stay byte-identical per seed.
  std::cerr << "suite completed in " << elapsed.count() << " ms\n";
  return outcome.clean ? 0 : kExitLawFailure;
}

int cmd_export_dot(const std::string& file) {
  if (auto fx = fixture_arg(file)) {
    if (auto* l = std::get_if<finloc::Lattice>(&fx->value)) {
      std::cout << finloc::hasse_dot(*l, file.substr(8));
      return 0;
    }
    std::cout << finloc::hasse_dot(std::get<finloc::BModule>(fx->value).carrier(),
                                   file.substr(8));
    return 0;
  }
  json j = load_json_file(file);
  if (j.contains("elements") && j.contains("leq") && !j.contains("join")) {
    std::cout << finloc::hasse_dot(finloc::parse_poset(j), file);
  } else {
    std::cout << finloc::hasse_dot(finloc::parse_lattice(j), file);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite locales, modules and sheaves: law checking and conversions"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Options opt;
  std::string file, subset;
  uint64_t seed = 0;
  int count = 25;
  int max_size = 10;
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", seed, "generator seed (used by seeded subcommands)");
  app.add_option("--count", count, "number of random instances");
  app.add_option("--max-size", max_size, "cap on generated germ counts (shrinks only)");

  auto* frame = app.add_subcommand("frame", "frame operations")->require_subcommand(1);
  auto* frame_check = frame->add_subcommand("check", "verify the frame laws");
  frame_check->add_option("file", file)->required();

  auto* module = app.add_subcommand("module", "module operations")->require_subcommand(1);
  auto* module_check = module->add_subcommand("check", "stability/openness/etale report");
  module_check->add_option("file", file)->required();
  auto* module_sections = module->add_subcommand("sections", "sections and their presheaf");
  module_sections->add_option("file", file)->required();
  auto* module_to_matrix = module->add_subcommand("to-matrix", "Gram matrix of the sections");
  module_to_matrix->add_option("file", file)->required();

  auto* hilbert = app.add_subcommand("hilbert", "inner product operations")->require_subcommand(1);
  auto* hilbert_check = hilbert->add_subcommand("check", "inner product axioms and flags");
  hilbert_check->add_option("file", file)->required();
  auto* hilbert_basis = hilbert->add_subcommand("basis", "Hilbert basis check");
  hilbert_basis->add_option("file", file)->required();
  hilbert_basis->add_option("subset", subset, "comma-separated element indices")->required();

  auto* matrix = app.add_subcommand("matrix", "projection matrix operations")->require_subcommand(1);
  auto* matrix_to_module = matrix->add_subcommand("to-module", "module of a projection matrix");
  matrix_to_module->add_option("file", file)->required();

  auto* hom = app.add_subcommand("hom", "module homomorphism operations")->require_subcommand(1);
  auto* hom_adjoint = hom->add_subcommand("adjoint", "adjoint of a homomorphism");
  hom_adjoint->add_option("file", file)->required();
  auto* hom_check = hom->add_subcommand("check", "hom/sheaf-hom/adjointability verdicts");
  hom_check->add_option("file", file)->required();

  auto* map = app.add_subcommand("map", "B-locale map operations")->require_subcommand(1);
  auto* map_dagger = map->add_subcommand("dagger-check", "direct image vs adjoint");
  map_dagger->add_option("file", file)->required();

  auto* suite = app.add_subcommand("suite", "generator batteries")->require_subcommand(1);
  auto* suite_run = suite->add_subcommand("run", "fixtures plus seeded random instances");

  auto* exp = app.add_subcommand("export", "diagram export")->require_subcommand(1);
  auto* exp_dot = exp->add_subcommand("dot", "Hasse diagram in DOT format");
  exp_dot->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (frame_check->parsed()) return cmd_frame_check(file, opt);
    if (module_check->parsed()) return cmd_module_check(file, opt);
    if (module_sections->parsed()) return cmd_module_sections(file, opt);
    if (module_to_matrix->parsed()) return cmd_module_to_matrix(file, opt);
    if (hilbert_check->parsed()) return cmd_hilbert_check(file, opt);
    if (hilbert_basis->parsed()) return cmd_hilbert_basis(file, subset, opt);
    if (matrix_to_module->parsed()) return cmd_matrix_to_module(file, opt);
    if (hom_adjoint->parsed()) return cmd_hom_adjoint(file, opt);
    if (hom_check->parsed()) return cmd_hom_check(file, opt);
    if (map_dagger->parsed()) return cmd_map_dagger_check(file, opt);
    if (suite_run->parsed()) return cmd_suite_run(seed, count, max_size, opt);
    if (exp_dot->parsed()) return cmd_export_dot(file);
  } catch (const finloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
