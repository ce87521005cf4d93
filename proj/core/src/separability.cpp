#include "musep/separability.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "json.hpp"

namespace musep {

namespace {

using json = nlohmann::json;

constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

// Copies src into dst; returns the offset of src's points.
Point append_model(KripkeModel& dst, const KripkeModel& src) {
  auto offset = static_cast<Point>(dst.size());
  std::vector<std::uint32_t> amap;
  for (const auto& a : src.actions) amap.push_back(dst.action_id(a));
  for (const auto& p : src.props) dst.prop_id(p);
  for (Point v = 0; v < src.size(); ++v) dst.add_point(src.color_over(v, dst.props));
  for (Point v = 0; v < src.size(); ++v)
    for (const auto& [a, w] : src.succ[v]) dst.add_edge(offset + v, amap[a], offset + w);
  return offset;
}

Formula all_boxes(const std::vector<std::string>& actions, const Formula& x) {
  std::vector<Formula> bs;
  for (const auto& a : actions) bs.push_back(Formula::box(a, x));
  return Formula::conj(std::move(bs));
}

}  // namespace

std::string_view class_name(ModelClass c) {
  switch (c) {
    case ModelClass::General: return "general";
    case ModelClass::Words: return "words";
    case ModelClass::FiniteTrees: return "finite-trees";
    case ModelClass::FiniteWords: return "finite-words";
    case ModelClass::InfiniteWords: return "infinite-words";
    case ModelClass::Ontology: return "ontology";
  }
  return "general";
}

std::optional<ModelClass> class_from_name(std::string_view name) {
  for (auto c : {ModelClass::General, ModelClass::Words, ModelClass::FiniteTrees, ModelClass::FiniteWords,
                 ModelClass::InfiniteWords, ModelClass::Ontology})
    if (class_name(c) == name) return c;
  return std::nullopt;
}

bool is_word_class(ModelClass c) {
  return c == ModelClass::Words || c == ModelClass::FiniteWords || c == ModelClass::InfiniteWords;
}

Alphabet joint_alphabet(const std::vector<Formula>& fs, ModelClass c, const Signature& hint) {
  std::set<std::string> actions, props;
  for (const auto& f : fs) {
    auto info = analyze(f);
    actions.insert(info.actions.begin(), info.actions.end());
    props.insert(info.props.begin(), info.props.end());
  }
  auto order = [](const std::vector<std::string>& first, std::set<std::string> used) {
    std::vector<std::string> out;
    for (const auto& x : first)
      if (used.erase(x)) out.push_back(x);
    out.insert(out.end(), used.begin(), used.end());
    return out;
  };
  Alphabet a{order(hint.actions(), actions), order(hint.props(), props)};
  if (is_word_class(c)) {
    if (a.actions.size() > 1) throw FormulaError("word classes need a single action");
    if (a.actions.empty()) a.actions = {hint.actions().size() == 1 ? hint.actions()[0] : std::string("a")};
  }
  return a;
}

Formula class_constraint(ModelClass c, const std::vector<std::string>& actions, const std::optional<Formula>& ontology) {
  const std::string x = "_cls";
  switch (c) {
    case ModelClass::General:
    case ModelClass::Words:
      return Formula::top();
    case ModelClass::FiniteTrees:
    case ModelClass::FiniteWords:
      if (actions.empty()) return Formula::top();
      return Formula::mu(x, all_boxes(actions, Formula::var(x)));
    case ModelClass::InfiniteWords: {
      if (actions.empty()) return Formula::bottom();
      std::vector<Formula> ds;
      for (const auto& a : actions) ds.push_back(Formula::diamond(a, Formula::var(x)));
      return Formula::nu(x, Formula::disj(std::move(ds)));
    }
    case ModelClass::Ontology: {
      if (!ontology) throw FormulaError("ontology class needs an ontology formula");
      auto n = normalize(*ontology);
      require_alternation_free(n);
      if (actions.empty()) return *ontology;
      return Formula::nu(x, Formula::conj(*ontology, all_boxes(actions, Formula::var(x))));
    }
  }
  return Formula::top();
}

std::pair<Formula, Formula> relativize(ModelClass c, const std::optional<Formula>& ontology, const Formula& f,
                                       const Formula& g, const std::vector<std::string>& actions) {
  auto theta = class_constraint(c, actions, ontology);
  return {normalize(Formula::conj(theta, f)), normalize(Formula::conj(theta, g))};
}

// ---------------------------------------------------------------------------

std::vector<bool> consistent_pairs(const Npta& a, const Npta& b,
                                   const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs, unsigned jobs,
                                   std::optional<std::uint64_t> seed) {
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, pairs.size()))));
  std::vector<char> result(pairs.size(), 0);
  auto work = [&](std::size_t lo, std::size_t hi) {
    if (lo >= hi) return;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> batch;
    for (std::size_t i = lo; i < hi; ++i) batch.push_back(pairs[order[i]]);
    auto prod = intersect(a, b, batch);
    auto e = analyze_emptiness(prod.automaton);
    for (std::size_t i = lo; i < hi; ++i) result[order[i]] = e.nonempty[prod.roots[i - lo]] ? 1 : 0;
  };
  const std::size_t chunk = (pairs.size() + jobs - 1) / jobs;
  if (jobs == 1) {
    work(0, pairs.size());
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j)
      threads.emplace_back(work, j * chunk, std::min(pairs.size(), (j + 1) * chunk));
    for (auto& t : threads) t.join();
  }
  return {result.begin(), result.end()};
}

// ---------------------------------------------------------------------------

SeparabilityProblem::SeparabilityProblem(const Formula& f, const Formula& g, EngineOptions options)
    : options_(std::move(options)) {
  std::vector<Formula> fs{f, g};
  if (options_.ontology) fs.push_back(*options_.ontology);
  alphabet_ = joint_alphabet(fs, options_.model_class, options_.hint);
  std::tie(left_f_, right_f_) = relativize(options_.model_class, options_.ontology, f, g, alphabet_.actions);
  require_alternation_free(left_f_);
  require_alternation_free(right_f_);
  bool words = is_word_class(options_.model_class);
  left_ = compile(left_f_, alphabet_.actions, alphabet_.props, words);
  right_ = compile(right_f_, alphabet_.actions, alphabet_.props, words);
  init();
}

SeparabilityProblem::SeparabilityProblem(Npta left, Npta right, EngineOptions options)
    : options_(std::move(options)), left_(std::move(left)), right_(std::move(right)) {
  if (left_.actions != right_.actions || left_.props != right_.props)
    throw std::invalid_argument("automata over different alphabets");
  alphabet_ = {left_.actions, left_.props};
  init();
}

void SeparabilityProblem::init() {
  left_e_ = analyze_emptiness(left_);
  right_e_ = analyze_emptiness(right_);
  build_pairs();
  compute_consistency();
  if (pairs_[0].consistent) {
    auto prod = intersect(left_, right_);
    auto e = analyze_emptiness(prod.automaton);
    throw NotExclusiveError("formulas are not mutually exclusive",
                            emptiness_witness(prod.automaton, e, prod.automaton.initial));
  }
  compute_tallness();
  compute_finite_flags();
  for (const auto& p : pairs_) {
    if (p.consistent && (p.tallness != kInfiniteTallness || !p.finite_tree))
      throw std::logic_error("consistent pair with bounded tallness");
  }
  if (tallness() != kInfiniteTallness && static_cast<std::uint64_t>(tallness() + 1) > cap_l())
    throw std::logic_error("tallness exceeds the cap |Q||Q'|+1");
}

std::uint32_t SeparabilityProblem::pair_id(std::uint32_t q, std::uint32_t r) {
  auto key = (std::uint64_t{q} << 32) | r;
  auto [it, fresh] = index_.emplace(key, static_cast<std::uint32_t>(pairs_.size()));
  if (fresh) {
    pairs_.push_back(PairInfo{q, r, -1, false, false});
    trans_.emplace_back();
  }
  return it->second;
}

void SeparabilityProblem::build_pairs() {
  pair_id(left_.initial, right_.initial);
  const auto na = static_cast<std::uint32_t>(alphabet_.actions.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>>
      cover_cache;
  for (std::size_t x = 0; x < pairs_.size(); ++x) {
    auto q = pairs_[x].left, r = pairs_[x].right;
    std::vector<Transition> out;
    for (Color c = 0; c < left_.num_colors(); ++c) {
      if (!left_e_.ne[q][c] || !right_e_.ne[r][c]) continue;
      const auto& ls = left_.delta[q][c];
      const auto& rs = right_.delta[r][c];
      for (std::uint32_t i = 0; i < ls.size(); ++i) {
        const auto& s = ls[i];
        if (!std::all_of(s.begin(), s.end(), [&](const Move& m) { return left_e_.nonempty[m.second]; })) continue;
        for (std::uint32_t j = 0; j < rs.size(); ++j) {
          const auto& t = rs[j];
          if (!std::all_of(t.begin(), t.end(), [&](const Move& m) { return right_e_.nonempty[m.second]; })) continue;
          std::vector<std::vector<std::uint32_t>> xs(na), ys(na);
          for (const auto& [a, p] : s) xs[a].push_back(p);
          for (const auto& [a, p] : t) ys[a].push_back(p);
          std::vector<const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>*> opts(na);
          bool dead = false;
          for (std::uint32_t a = 0; a < na && !dead; ++a) {
            auto key = std::make_pair(static_cast<std::uint32_t>(xs[a].size()), static_cast<std::uint32_t>(ys[a].size()));
            auto it = cover_cache.find(key);
            if (it == cover_cache.end()) it = cover_cache.emplace(key, minimal_covers(key.first, key.second)).first;
            opts[a] = &it->second;
            dead = opts[a]->empty();
          }
          if (dead) continue;
          std::vector<std::size_t> pick(na, 0);
          while (true) {
            Transition tr{c, i, j, {}};
            for (std::uint32_t a = 0; a < na; ++a)
              for (const auto& [u, v] : (*opts[a])[pick[a]]) tr.children.emplace_back(a, pair_id(xs[a][u], ys[a][v]));
            std::sort(tr.children.begin(), tr.children.end());
            tr.children.erase(std::unique(tr.children.begin(), tr.children.end()), tr.children.end());
            out.push_back(std::move(tr));
            std::uint32_t a = 0;
            while (a < na && ++pick[a] == opts[a]->size()) pick[a++] = 0;
            if (a == na) break;
          }
        }
      }
    }
    trans_[x] = std::move(out);
  }
}

void SeparabilityProblem::compute_consistency() {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> qs;
  for (const auto& p : pairs_) qs.emplace_back(p.left, p.right);
  auto res = consistent_pairs(left_, right_, qs, options_.jobs, options_.seed);
  for (std::size_t i = 0; i < pairs_.size(); ++i) pairs_[i].consistent = res[i];
}

void SeparabilityProblem::compute_tallness() {
  const auto n = pairs_.size();
  std::vector<std::int64_t> death(n, kNever);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> occ(n);  // (pair, transition)
  std::vector<std::size_t> alive(n);
  std::vector<std::vector<char>> killed(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    alive[x] = trans_[x].size();
    killed[x].assign(trans_[x].size(), 0);
    for (std::uint32_t t = 0; t < trans_[x].size(); ++t) {
      std::vector<std::uint32_t> kids;
      for (const auto& [a, p] : trans_[x][t].children) kids.push_back(p);
      std::sort(kids.begin(), kids.end());
      kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
      for (auto p : kids) occ[p].emplace_back(x, t);
    }
  }
  std::vector<std::uint32_t> cur, next;
  for (std::uint32_t x = 0; x < n; ++x) {
    auto q = pairs_[x].left, r = pairs_[x].right;
    bool fail0 = false;
    for (Color c = 0; c < left_.num_colors() && !fail0; ++c) fail0 = left_e_.ne[q][c] && right_e_.ne[r][c];
    if (!fail0) {
      death[x] = 0;
      cur.push_back(x);
    } else if (trans_[x].empty()) {
      death[x] = 1;
      next.push_back(x);
    }
  }
  std::int64_t round = 0;
  while (!cur.empty() || !next.empty()) {
    for (auto p : cur)
      for (const auto& [x, t] : occ[p]) {
        if (killed[x][t]) continue;
        killed[x][t] = 1;
        if (--alive[x] == 0 && death[x] == kNever) {
          death[x] = round + 1;
          next.push_back(x);
        }
      }
    cur = std::move(next);
    next.clear();
    ++round;
  }
  for (std::uint32_t x = 0; x < n; ++x) pairs_[x].tallness = death[x] == kNever ? kInfiniteTallness : death[x] - 1;
}

void SeparabilityProblem::compute_finite_flags() {
  const auto n = pairs_.size();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> occ(n);
  std::vector<std::vector<std::size_t>> missing(n);
  std::deque<std::uint32_t> todo;
  std::vector<char> ok(n, 0);  // consistent or finite_tree
  for (std::uint32_t x = 0; x < n; ++x) {
    missing[x].resize(trans_[x].size());
    for (std::uint32_t t = 0; t < trans_[x].size(); ++t) {
      std::set<std::uint32_t> kids;
      for (const auto& [a, p] : trans_[x][t].children) kids.insert(p);
      missing[x][t] = kids.size();
      for (auto p : kids) occ[p].emplace_back(x, t);
    }
  }
  auto mark_finite = [&](std::uint32_t x) {
    if (pairs_[x].finite_tree) return;
    pairs_[x].finite_tree = true;
    if (!ok[x]) {
      ok[x] = 1;
      todo.push_back(x);
    }
  };
  for (std::uint32_t x = 0; x < n; ++x) {
    if (pairs_[x].consistent) {
      ok[x] = 1;
      todo.push_back(x);
    }
    for (std::uint32_t t = 0; t < trans_[x].size(); ++t)
      if (missing[x][t] == 0) mark_finite(x);
  }
  while (!todo.empty()) {
    auto p = todo.front();
    todo.pop_front();
    for (const auto& [x, t] : occ[p])
      if (--missing[x][t] == 0) mark_finite(x);
  }
}

std::size_t SeparabilityProblem::transition_count() const {
  std::size_t n = 0;
  for (const auto& t : trans_) n += t.size();
  return n;
}

bool SeparabilityProblem::separable_at(std::uint64_t n) const {
  return tallness() != kInfiniteTallness && tallness() < static_cast<std::int64_t>(n);
}

SeparabilityVerdict SeparabilityProblem::verdict() const {
  SeparabilityVerdict v;
  v.model_class = options_.model_class;
  v.cap_l = cap_l();
  v.separable = tallness() != kInfiniteTallness;
  if (v.separable) v.n_min = static_cast<std::uint64_t>(tallness() + 1);
  return v;
}

Counterexample SeparabilityProblem::counterexample(std::uint64_t n) const {
  if (separable_at(n)) throw std::invalid_argument("depth-" + std::to_string(n) + " separation holds");
  Counterexample ce;
  ce.n = n;
  for (auto* m : {&ce.left, &ce.right}) {
    m->actions = alphabet_.actions;
    m->props = alphabet_.props;
  }
  std::tie(ce.left.root, ce.right.root) = build(ce.left, ce.right, 0, n);
  ce.left_ok = left_f_.valid() ? check_model(ce.left, left_f_) : accepts(left_, ce.left);
  ce.right_ok = right_f_.valid() ? check_model(ce.right, right_f_) : accepts(right_, ce.right);
  ce.bisimilar_ok = n_bisimilar(ce.left, ce.right, n);
  return ce;
}

std::pair<Point, Point> SeparabilityProblem::build(KripkeModel& m, KripkeModel& m2, std::uint32_t x, std::uint64_t n) const {
  const auto& info = pairs_[x];
  if (n == 0) {
    for (Color c = 0; c < left_.num_colors(); ++c) {
      if (!left_e_.ne[info.left][c] || !right_e_.ne[info.right][c]) continue;
      auto lw = emptiness_witness(left_, left_e_, info.left, c);
      auto rw = emptiness_witness(right_, right_e_, info.right, c);
      auto lo = append_model(m, lw);
      auto ro = append_model(m2, rw);
      return {lo + lw.root, ro + rw.root};
    }
    throw std::logic_error("pair without a common color");
  }
  for (const auto& t : trans_[x]) {
    bool good = std::all_of(t.children.begin(), t.children.end(), [&](const auto& ch) {
      return pairs_[ch.second].tallness >= static_cast<std::int64_t>(n - 1);
    });
    if (!good) continue;
    auto v = m.add_point(t.color);
    auto v2 = m2.add_point(t.color);
    for (const auto& [a, p] : t.children) {
      auto [w, w2] = build(m, m2, p, n - 1);
      m.add_edge(v, a, w);
      m2.add_edge(v2, a, w2);
    }
    return {v, v2};
  }
  throw std::logic_error("no transition realizes the required tallness");
}

// ---------------------------------------------------------------------------

std::string counterexample_json(const Counterexample& c) {
  json j;
  j["model"] = json::parse(model_to_json(c.left));
  j["model'"] = json::parse(model_to_json(c.right));
  j["n"] = c.n;
  j["valid"] = c.valid();
  return j.dump();
}

std::string SeparabilityVerdict::to_json() const {
  json j;
  j["separable"] = separable;
  j["n_min"] = n_min ? json(*n_min) : json(nullptr);
  j["cap_l"] = cap_l;
  j["class"] = std::string(class_name(model_class));
  j["counterexample"] = counterexample ? json::parse(counterexample_json(*counterexample)) : json(nullptr);
  return j.dump(2);
}

std::string SeparabilityVerdict::to_text() const {
  std::string s = separable ? "separable" : "not separable";
  s += "\nclass: " + std::string(class_name(model_class));
  if (n_min) s += "\nn_min: " + std::to_string(*n_min);
  s += "\ncap_l: " + std::to_string(cap_l);
  if (counterexample) {
    s += "\ncounterexample at depth " + std::to_string(counterexample->n) + ": " +
         (counterexample->valid() ? "valid" : "INVALID");
    s += "\nmodel: " + model_to_json(counterexample->left);
    s += "\nmodel': " + model_to_json(counterexample->right);
  }
  return s + "\n";
}

SeparabilityVerdict decide_separability(const Formula& f, const Formula& g, const EngineOptions& options,
                                        std::optional<std::uint64_t> counterexample_depth) {
  SeparabilityProblem p(f, g, options);
  auto v = p.verdict();
  if (counterexample_depth && !p.separable_at(*counterexample_depth)) v.counterexample = p.counterexample(*counterexample_depth);
  return v;
}

}  // namespace musep
