#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "musep/families.hpp"
#include "musep/synthesis.hpp"
#include "musep/tree_pool.hpp"

using namespace musep;
using json = nlohmann::json;

namespace {

// Exit codes. The logical verdict is never one of them.
enum Status : int {
  kOk = 0,
  kInternal = 1,
  kBadInput = 2,
  kNotSeparable = 3,
  kNotVerified = 4,
  kBudget = 5,
  kNotExclusive = 6,
};

struct Config {
  std::vector<std::string> inputs;
  std::string class_name = "general";
  std::string ontology_file;
  std::string format = "text";
  std::string output;
  std::string emit_dot;
  bool craig = false;
  long long counterexample = -1;
  unsigned jobs = 1;
  long long seed = -1;
  std::uint32_t budget_depth = 3;
  std::uint32_t budget_branching = 2;
  std::uint64_t depth = 0;
  std::string family;
  unsigned from = 1, to = 4;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct Inputs {
  Signature sig;
  std::vector<Formula> formulas;
};

// Formula files, or a single problem file holding two formulas.
Inputs load_inputs(const std::vector<std::string>& paths, std::size_t want) {
  Inputs in;
  if (paths.size() == 1 && want >= 2) {
    auto p = parse_problem_file(read_file(paths[0]));
    in.sig = p.sig;
    in.formulas = {p.left, p.right};
    return in;
  }
  if (paths.size() != want)
    throw CLI::ValidationError("expected " + std::to_string(want) + " formula files (or one problem file)");
  for (const auto& path : paths) {
    auto f = parse_formula_file(read_file(path));
    in.sig = in.sig.merged(f.sig);
    in.formulas.push_back(f.formula);
  }
  return in;
}

EngineOptions engine_options(const Config& c, const Signature& sig) {
  EngineOptions o;
  auto cls = class_from_name(c.class_name);
  if (!cls) throw CLI::ValidationError("unknown class '" + c.class_name + "'");
  o.model_class = *cls;
  if (!c.ontology_file.empty()) {
    if (o.model_class != ModelClass::General && o.model_class != ModelClass::Ontology)
      throw CLI::ValidationError("--ontology only combines with --class ontology");
    auto f = parse_formula_file(read_file(c.ontology_file));
    o.ontology = f.formula;
    o.model_class = ModelClass::Ontology;
    o.hint = sig.merged(f.sig);
  } else {
    if (o.model_class == ModelClass::Ontology) throw CLI::ValidationError("--class ontology needs --ontology FILE");
    o.hint = sig;
  }
  o.jobs = std::max(1u, c.jobs);
  if (c.seed >= 0) o.seed = static_cast<std::uint64_t>(c.seed);
  return o;
}

VerifyOptions verify_options(const Config& c, const EngineOptions& e) {
  VerifyOptions v;
  v.model_class = e.model_class;
  v.ontology = e.ontology;
  v.hint = e.hint;
  v.spot_depth = c.budget_depth;
  v.spot_branching = c.budget_branching;
  return v;
}

void emit_dot(const std::string& dir, const std::string& name, const Npta& a) {
  std::filesystem::create_directories(dir);
  write_file(dir + "/" + name + ".dot", to_dot(a));
  write_file(dir + "/" + name + "_game.dot", to_dot(emptiness_game(a)));
}

// Separator as a self-contained artifact: re-parses with parse_formula_file or FormulaDag::from_json.
std::string separator_artifact(const FormulaDag& dag, const Signature& sig, DagFormat fmt) {
  if (fmt == DagFormat::Text || fmt == DagFormat::Tree) return sig.header() + "\n" + render_formula(dag, fmt);
  return render_formula(dag, fmt);
}

int cmd_decide(const Config& c) {
  auto in = load_inputs(c.inputs, 2);
  auto opts = engine_options(c, in.sig);
  SeparabilityProblem p(in.formulas[0], in.formulas[1], opts);
  auto v = p.verdict();
  std::string note;
  if (c.counterexample >= 0) {
    auto n = static_cast<std::uint64_t>(c.counterexample);
    if (p.separable_at(n))
      note = "no counterexample: depth " + std::to_string(n) + " separates";
    else
      v.counterexample = p.counterexample(n);
  }
  if (!c.emit_dot.empty()) {
    emit_dot(c.emit_dot, "left", p.left());
    emit_dot(c.emit_dot, "right", p.right());
  }
  if (c.format == "json") {
    auto j = json::parse(v.to_json());
    if (!note.empty()) j["note"] = note;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << v.to_text();
    if (!note.empty()) std::cout << note << "\n";
  }
  return kOk;
}

int cmd_separate(const Config& c) {
  auto in = load_inputs(c.inputs, 2);
  auto opts = engine_options(c, in.sig);
  auto fmt = dag_format_from_name(c.format);
  if (!fmt) throw CLI::ValidationError("unknown format '" + c.format + "'");
  SeparatorResult r;
  try {
    r = c.craig ? synthesize_craig_separator(in.formulas[0], in.formulas[1], opts)
                : synthesize_separator(in.formulas[0], in.formulas[1], opts);
  } catch (const NotSeparableError& e) {
    std::cerr << "musep: " << e.what() << "\n";
    return kNotSeparable;
  }
  if (!c.output.empty()) write_file(c.output, separator_artifact(r.separator, in.sig, *fmt));
  if (*fmt == DagFormat::Text || *fmt == DagFormat::Tree) {
    std::cout << "separator: " << render_formula(r.separator, *fmt);
    if (c.craig) {
      std::cout << "shared props:";
      for (const auto& p : r.shared_props) std::cout << " " << p;
      std::cout << "\n";
    }
    std::cout << r.verdict.to_text() << r.report.to_text();
  } else {
    json j;
    j["verdict"] = json::parse(r.verdict.to_json());
    j["separator"] = json::parse(render_formula(r.separator, *fmt));
    if (c.craig) j["shared_props"] = r.shared_props;
    j["report"] = json::parse(r.report.to_json());
    std::cout << j.dump(2) << "\n";
  }
  if (!r.report.verified()) {
    std::cerr << "musep: separator failed verification\n";
    return kNotVerified;
  }
  return kOk;
}

int cmd_verify(const Config& c) {
  Inputs in;
  if (c.inputs.size() == 2) {
    auto p = parse_problem_file(read_file(c.inputs[0]));
    auto psi = parse_formula_file(read_file(c.inputs[1]));
    in.sig = p.sig.merged(psi.sig);
    in.formulas = {p.left, psi.formula, p.right};
  } else {
    in = load_inputs(c.inputs, 3);
  }
  auto opts = engine_options(c, in.sig);
  auto report = verify_separator(in.formulas[0], in.formulas[1], in.formulas[2], verify_options(c, opts));
  std::cout << (c.format == "json" ? report.to_json() + "\n" : report.to_text());
  return report.verified() ? kOk : kNotVerified;
}

int cmd_uniform(const Config& c) {
  auto in = load_inputs(c.inputs, 1);
  auto opts = engine_options(c, in.sig);
  auto fmt = dag_format_from_name(c.format);
  if (!fmt) throw CLI::ValidationError("unknown format '" + c.format + "'");
  auto dag = uniform_consequence_of(in.formulas[0], c.depth, opts.model_class, opts.ontology, opts.hint);
  if (!c.output.empty()) write_file(c.output, separator_artifact(dag, in.sig, *fmt));
  std::cout << render_formula(dag, *fmt);
  return kOk;
}

int cmd_dump(const Config& c) {
  auto in = load_inputs(c.inputs, 1);
  auto opts = engine_options(c, in.sig);
  std::vector<Formula> fs{in.formulas[0]};
  if (opts.ontology) fs.push_back(*opts.ontology);
  auto alpha = joint_alphabet(fs, opts.model_class, opts.hint);
  auto theta = class_constraint(opts.model_class, alpha.actions, opts.ontology);
  auto a = compile(Formula::conj(theta, in.formulas[0]), alpha.actions, alpha.props, is_word_class(opts.model_class));
  if (!c.emit_dot.empty()) emit_dot(c.emit_dot, "automaton", a);
  std::cout << (c.format == "dot" ? to_dot(a) : dump_text(a));
  return kOk;
}

int cmd_bench(const Config& c) {
  auto kind = family_from_name(c.family);
  if (!kind) throw CLI::ValidationError("unknown family '" + c.family + "'");
  std::cout << "family,n,left_size,right_size,separable,n_min,separator_dag_nodes,separator_modal_depth,"
               "separator_tree_estimate,seconds\n";
  for (unsigned n = c.from; n <= c.to; ++n) {
    auto fam = gen_benchmark_family(*kind, n);
    auto start = std::chrono::steady_clock::now();
    EngineOptions o;
    o.model_class = fam.model_class;
    o.hint = fam.sig;
    o.jobs = std::max(1u, c.jobs);
    SeparabilityProblem p(fam.left, fam.right, o);
    auto v = p.verdict();
    std::string nodes, depth, estimate;
    if (v.separable) {
      auto d = is_word_class(fam.model_class) ? uniform_consequence_words(p.left(), *v.n_min)
                                              : uniform_consequence(p.left(), *v.n_min);
      nodes = std::to_string(d.reachable_count());
      depth = std::to_string(d.modal_depth());
      std::ostringstream e;
      e << static_cast<double>(d.tree_size_estimate());
      estimate = e.str();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << family_name(*kind) << "," << n << "," << analyze(fam.left).size << "," << analyze(fam.right).size
              << "," << (v.separable ? "true" : "false") << "," << (v.n_min ? std::to_string(*v.n_min) : "") << ","
              << nodes << "," << depth << "," << estimate << "," << secs << "\n";
  }
  return kOk;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--class", c.class_name, "general|words|finite-trees|finite-words|infinite-words|ontology");
  sub->add_option("--ontology", c.ontology_file, "formula file with the ontology θ0")->check(CLI::ExistingFile);
  sub->add_option("--jobs", c.jobs, "threads for consistency checks");
  sub->add_option("--seed", c.seed, "shuffle consistency evaluation order");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modal separability of alternation-free mu-calculus formulae"};
  app.require_subcommand(1);
  Config c;

  auto* decide = app.add_subcommand("decide", "decide modal separability");
  decide->add_option("inputs", c.inputs, "two formula files or one problem file")->required()->check(CLI::ExistingFile);
  add_common(decide, c);
  decide->add_option("--counterexample", c.counterexample, "extract a depth-N counterexample pair");
  decide->add_option("--format", c.format, "text|json");
  decide->add_option("--emit-dot", c.emit_dot, "write automata and emptiness games as DOT");

  auto* separate = app.add_subcommand("separate", "synthesize and verify a separator");
  separate->add_option("inputs", c.inputs, "two formula files or one problem file")->required()->check(CLI::ExistingFile);
  add_common(separate, c);
  separate->add_flag("--craig", c.craig, "use only the propositions shared by both inputs");
  separate->add_option("--format", c.format, "text|tree|json|dag|stats");
  separate->add_option("-o,--output", c.output, "write the separator artifact to a file");

  auto* verify = app.add_subcommand("verify", "check a candidate separator");
  verify->add_option("inputs", c.inputs, "F PSI F' (or PROBLEM PSI)")->required()->check(CLI::ExistingFile);
  add_common(verify, c);
  verify->add_option("--format", c.format, "text|json");
  verify->add_option("--budget-depth", c.budget_depth, "spot-check tree depth");
  verify->add_option("--budget-branching", c.budget_branching, "spot-check branching");

  auto* uniform = app.add_subcommand("uniform", "n-uniform consequence of a formula");
  uniform->add_option("input", c.inputs, "formula file")->required()->check(CLI::ExistingFile);
  uniform->add_option("-n,--depth", c.depth, "modal depth")->required();
  add_common(uniform, c);
  uniform->add_option("--format", c.format, "text|tree|json|dag|stats");
  uniform->add_option("-o,--output", c.output, "write the formula artifact to a file");

  auto* bench = app.add_subcommand("bench", "benchmark families as CSV");
  bench->add_option("--family", c.family, "counter-trees|counter-words|even-odd")->required();
  bench->add_option("--from", c.from, "first n");
  bench->add_option("--to", c.to, "last n");
  bench->add_option("--jobs", c.jobs, "threads for consistency checks");

  auto* dump = app.add_subcommand("dump-automaton", "print the compiled automaton");
  dump->add_option("input", c.inputs, "formula file")->required()->check(CLI::ExistingFile);
  add_common(dump, c);
  dump->add_option("--format", c.format, "text|dot");
  dump->add_option("--emit-dot", c.emit_dot, "also write automaton and emptiness game as DOT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (decide->parsed()) return cmd_decide(c);
    if (separate->parsed()) return cmd_separate(c);
    if (verify->parsed()) return cmd_verify(c);
    if (uniform->parsed()) return cmd_uniform(c);
    if (bench->parsed()) return cmd_bench(c);
    if (dump->parsed()) return cmd_dump(c);
  } catch (const NotExclusiveError& e) {
    std::cerr << "musep: " << e.what() << "\njoint model: " << model_to_json(e.witness()) << "\n";
    return kNotExclusive;
  } catch (const BudgetError& e) {
    std::cerr << "musep: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ParseError& e) {
    std::cerr << "musep: parse error: " << e.what() << "\n";
    return kBadInput;
  } catch (const FormulaError& e) {
    std::cerr << "musep: " << e.what() << "\n";
    return kBadInput;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "musep: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "musep: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
