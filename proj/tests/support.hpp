#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "musep/formula.hpp"
#include "musep/separability.hpp"

namespace testsupport {

inline std::string corpus_dir() { return MUSEP_CORPUS_DIR; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline musep::FormulaFile load(const std::string& name) {
  return musep::parse_formula_file(slurp(corpus_dir() + "/" + name + ".mu"));
}

struct NamedFormula {
  std::string name;
  musep::FormulaFile file;
};

/// Every top-level corpus formula, sorted by name.
inline std::vector<NamedFormula> corpus_formulas() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".mu") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  std::vector<NamedFormula> out;
  for (const auto& n : names) out.push_back({n, load(n)});
  return out;
}

struct CorpusPair {
  std::string left, right;
  musep::ModelClass model_class;
  musep::Signature sig;
  musep::Formula f, g;
  std::string label() const { return left + "/" + right + "@" + std::string(musep::class_name(model_class)); }
};

inline std::vector<CorpusPair> corpus_pairs() {
  std::vector<CorpusPair> out;
  std::istringstream in(slurp(corpus_dir() + "/pairs.txt"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string l, r, c;
    ls >> l >> r >> c;
    auto a = load(l), b = load(r);
    out.push_back({l, r, *musep::class_from_name(c), a.sig.merged(b.sig), a.formula, b.formula});
  }
  return out;
}

struct CraigCase {
  std::string name;
  musep::ProblemFile problem;
};

inline std::vector<CraigCase> craig_cases() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir() + "/craig"))
    if (e.path().extension() == ".mu") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  std::vector<CraigCase> out;
  for (const auto& n : names)
    out.push_back({n, musep::parse_problem_file(slurp(corpus_dir() + "/craig/" + n + ".mu"))});
  return out;
}

inline musep::EngineOptions options_for(const CorpusPair& p) {
  musep::EngineOptions o;
  o.model_class = p.model_class;
  o.hint = p.sig;
  return o;
}

}  // namespace testsupport
