#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conekit/cone.hpp"
#include "conekit/cone_off.hpp"
#include "conekit/hyperbolicity.hpp"
#include "conekit/metric_space.hpp"
#include "conekit/subspace.hpp"

namespace conekit {

/// One letter of a word in the action generators.
struct WordLetter {
  std::size_t generator = 0;
  bool inverse = false;
};

using Word = std::vector<WordLetter>;

/// A finite isometric action: named permutations of the points of a space,
/// each validated to preserve the metric.
class GroupAction {
 public:
  GroupAction(FiniteMetricSpace space, std::vector<std::string> names,
              std::vector<Permutation> generators)
      : space_(std::move(space)), names_(std::move(names)), gens_(std::move(generators)) {
    detail::require(names_.size() == gens_.size(), "one name per generator");
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      validatePermutation(gens_[g], names_[g]);
      inverses_.push_back(inverse(gens_[g]));
    }
  }

  const FiniteMetricSpace& space() const { return space_; }
  std::size_t generatorCount() const { return gens_.size(); }
  const std::string& generatorName(std::size_t g) const { return names_.at(g); }
  const Permutation& generator(std::size_t g) const { return gens_.at(g); }

  std::size_t generatorIndex(const std::string& name) const {
    for (std::size_t g = 0; g < names_.size(); ++g)
      if (names_[g] == name) return g;
    throw std::invalid_argument("unknown generator: " + name);
  }

  static Permutation identity(std::size_t n) {
    Permutation p(n);
    for (PointId x = 0; x < n; ++x) p[x] = x;
    return p;
  }

  /// Composition as functions: (a ∘ b)(x) = a(b(x)).
  static Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation out(b.size());
    for (PointId x = 0; x < b.size(); ++x) out[x] = a[b[x]];
    return out;
  }

  static Permutation inverse(const Permutation& p) {
    Permutation out(p.size());
    for (PointId x = 0; x < p.size(); ++x) out[p[x]] = x;
    return out;
  }

  /// Letters act left to right as outermost-first composition:
  /// (s1.s2)(x) = s1(s2(x)).
  Permutation evaluate(const Word& word) const {
    Permutation out = identity(space_.size());
    for (const WordLetter& l : word) {
      const Permutation& p = l.inverse ? inverses_.at(l.generator) : gens_.at(l.generator);
      out = compose(out, p);
    }
    return out;
  }

  struct Element {
    Permutation perm;
    std::string word;
  };

  /// Breadth-first word enumeration with permutation deduplication.
  /// `closed` reports whether the whole group was reached before the caps.
  struct Enumeration {
    std::vector<Element> elements;
    bool closed = true;
    std::size_t word_cap = 0;
  };

  Enumeration enumerate(std::size_t word_cap, std::size_t element_cap = 200000) const {
    std::vector<Permutation> alphabet;
    std::vector<std::string> letters;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      alphabet.push_back(gens_[g]);
      letters.push_back(names_[g]);
      alphabet.push_back(inverses_[g]);
      letters.push_back(names_[g] + "^-1");
    }
    return enumerateWords(identity(space_.size()), alphabet, letters, word_cap, element_cap);
  }

  static Enumeration enumerateWords(Permutation id, const std::vector<Permutation>& alphabet,
                                    const std::vector<std::string>& letters, std::size_t word_cap,
                                    std::size_t element_cap) {
    Enumeration out;
    out.word_cap = word_cap;
    std::set<Permutation> seen;
    seen.insert(id);
    out.elements.push_back({id, "1"});
    std::vector<Element> frontier = out.elements;
    for (std::size_t len = 1; len <= word_cap && !frontier.empty(); ++len) {
      std::vector<Element> next;
      for (const Element& e : frontier) {
        for (std::size_t a = 0; a < alphabet.size(); ++a) {
          Permutation p = compose(e.perm, alphabet[a]);
          if (seen.insert(p).second) {
            std::string w = e.word == "1" ? letters[a] : e.word + "." + letters[a];
            next.push_back({std::move(p), std::move(w)});
            if (out.elements.size() + next.size() >= element_cap) {
              out.closed = false;
              for (Element& n : next) out.elements.push_back(std::move(n));
              return out;
            }
          }
        }
      }
      for (Element& n : next) out.elements.push_back(n);
      frontier = std::move(next);
    }
    if (!frontier.empty()) out.closed = false;
    return out;
  }

 private:
  void validatePermutation(const Permutation& p, const std::string& name) const {
    detail::require(p.size() == space_.size(), "generator '" + name + "' has wrong length");
    std::vector<char> seen(p.size(), 0);
    for (PointId x = 0; x < p.size(); ++x) {
      detail::require(p[x] < p.size(), "generator '" + name + "' image out of range");
      detail::require(!seen[p[x]], "generator '" + name + "' is not a permutation");
      seen[p[x]] = 1;
    }
    for (PointId x = 0; x < p.size(); ++x)
      for (PointId y = x + 1; y < p.size(); ++y)
        detail::require(std::abs(space_.at(p[x], p[y]) - space_.at(x, y)) <= kSlack,
                        "generator '" + name + "' does not preserve distances");
  }

  FiniteMetricSpace space_;
  std::vector<std::string> names_;
  std::vector<Permutation> gens_;
  std::vector<Permutation> inverses_;
};

/// Dot-separated word over generator names; "name^-1" inverts a letter and
/// the literal "1" denotes the identity.
inline Word parse_word(const std::string& text, const GroupAction& action) {
  Word word;
  if (text == "1") return word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string token = text.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    detail::require(!token.empty(), "empty letter in word '" + text + "'");
    WordLetter letter;
    if (token.size() > 3 && token.substr(token.size() - 3) == "^-1") {
      letter.inverse = true;
      token = token.substr(0, token.size() - 3);
    }
    letter.generator = action.generatorIndex(token);
    word.push_back(letter);
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return word;
}

inline std::string render_word(const Word& word, const GroupAction& action) {
  if (word.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ".";
    out += action.generatorName(word[i].generator);
    if (word[i].inverse) out += "^-1";
  }
  return out;
}

/// Minimal displacement of a permutation, with its minimizing points.
struct TranslationLength {
  double value = 0.0;
  std::vector<PointId> minimizers;
};

inline TranslationLength translation_length_detail(const FiniteMetricSpace& space,
                                                   const Permutation& g) {
  detail::require(g.size() == space.size(), "permutation does not match the space");
  TranslationLength out;
  out.value = kInfinite;
  for (PointId x = 0; x < space.size(); ++x) out.value = std::min(out.value, space.at(x, g[x]));
  for (PointId x = 0; x < space.size(); ++x)
    if (space.at(x, g[x]) <= out.value + kSlack) out.minimizers.push_back(x);
  if (space.size() == 0) out.value = 0.0;
  return out;
}

/// Translation length of a word: min over points of d(x, g x).
inline double translation_length(const GroupAction& action, const Word& word) {
  return translation_length_detail(action.space(), action.evaluate(word)).value;
}

/// Injectivity radius of the subgroup generated by `subgroup_words`:
/// the minimum translation length over enumerated nontrivial elements.
struct InjectivityRadius {
  bool has_nontrivial = false;
  double value = kInfinite;
  std::string witness;
  std::size_t cap = 0;
  std::size_t elements = 0;
  bool capped = false;
  /// Every minimizing displacement starts or lands on a declared boundary
  /// point; such minima are untrusted on truncated models.
  bool boundary_realized = false;
};

inline InjectivityRadius injectivity_radius(const GroupAction& action,
                                            const std::vector<Word>& subgroup_words,
                                            std::size_t cap,
                                            const std::vector<PointId>& boundary = {}) {
  detail::require(!subgroup_words.empty(), "subgroup must have at least one generating word");
  std::vector<Permutation> alphabet;
  std::vector<std::string> letters;
  for (const Word& w : subgroup_words) {
    Permutation p = action.evaluate(w);
    alphabet.push_back(p);
    letters.push_back("(" + render_word(w, action) + ")");
    alphabet.push_back(GroupAction::inverse(p));
    letters.push_back("(" + render_word(w, action) + ")^-1");
  }
  GroupAction::Enumeration en = GroupAction::enumerateWords(
      GroupAction::identity(action.space().size()), alphabet, letters, cap, 200000);
  InjectivityRadius out;
  out.cap = cap;
  out.capped = !en.closed;
  Permutation best;
  for (const auto& el : en.elements) {
    if (el.word == "1") continue;
    bool trivial = true;
    for (PointId x = 0; x < el.perm.size(); ++x)
      if (el.perm[x] != x) {
        trivial = false;
        break;
      }
    if (trivial) continue;
    ++out.elements;
    TranslationLength tl = translation_length_detail(action.space(), el.perm);
    if (!out.has_nontrivial || tl.value < out.value) {
      out.has_nontrivial = true;
      out.value = tl.value;
      out.witness = el.word;
      best = el.perm;
    }
  }
  if (out.has_nontrivial && !boundary.empty()) {
    std::set<PointId> bnd(boundary.begin(), boundary.end());
    TranslationLength tl = translation_length_detail(action.space(), best);
    out.boundary_realized = true;
    for (PointId x : tl.minimizers)
      if (!bnd.count(x) && !bnd.count(best[x])) {
        out.boundary_realized = false;
        break;
      }
  }
  return out;
}

/// Every distance multiplied by lambda; hyperbolicity constants and
/// translation lengths scale by exactly the same factor.
inline FiniteMetricSpace rescale(const FiniteMetricSpace& space, double lambda) {
  detail::require(lambda > 0.0, "rescale factor must be positive");
  std::vector<double> d = space.raw();
  for (double& v : d) v *= lambda;
  return FiniteMetricSpace(space.size(), std::move(d), false);
}

inline WeightedGraph rescale(const WeightedGraph& graph, double lambda) {
  detail::require(lambda > 0.0, "rescale factor must be positive");
  WeightedGraph out = graph;
  for (auto& e : out.edges) e.w *= lambda;
  return out;
}

/// Quotient of the space by the group generated by the action's generators:
/// d(orbit, orbit') = min over representative pairs. Orbits are computed
/// exactly from the generator moves, so closure never depends on a word cap.
struct QuotientMetric {
  FiniteMetricSpace space;
  std::vector<PointId> representatives;
  std::vector<std::size_t> orbit_of;
};

inline QuotientMetric quotient_metric(const GroupAction& action) {
  const FiniteMetricSpace& X = action.space();
  const std::size_t n = X.size();
  std::vector<PointId> parent(n);
  for (PointId x = 0; x < n; ++x) parent[x] = x;
  auto find = [&](PointId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t g = 0; g < action.generatorCount(); ++g)
    for (PointId x = 0; x < n; ++x) {
      PointId a = find(x), b = find(action.generator(g)[x]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  QuotientMetric out;
  std::vector<std::size_t> orbitOf(n);
  for (PointId x = 0; x < n; ++x)
    if (find(x) == x) out.representatives.push_back(x);
  for (PointId x = 0; x < n; ++x)
    orbitOf[x] = static_cast<std::size_t>(std::lower_bound(out.representatives.begin(),
                                                           out.representatives.end(), find(x)) -
                                          out.representatives.begin());
  // Orbits must be stable under every generator.
  for (std::size_t g = 0; g < action.generatorCount(); ++g)
    for (PointId x = 0; x < n; ++x)
      detail::require(orbitOf[action.generator(g)[x]] == orbitOf[x], "orbit closure failed");
  const std::size_t m = out.representatives.size();
  std::vector<double> qd(m * m, kInfinite);
  for (std::size_t i = 0; i < m; ++i) qd[i * m + i] = 0.0;
  for (PointId x = 0; x < n; ++x)
    for (PointId y = 0; y < n; ++y) {
      std::size_t i = orbitOf[x], j = orbitOf[y];
      if (i != j) qd[i * m + j] = std::min(qd[i * m + j], X.at(x, y));
    }
  out.space = FiniteMetricSpace(m, std::move(qd), true);
  out.orbit_of = std::move(orbitOf);
  return out;
}

/// One member of a rotation family: a subspace together with the words
/// generating its attached subgroup, and optionally the declared images of
/// its index under each action generator.
struct RotationPair {
  std::string name;
  Subspace subspace;
  std::vector<Word> subgroup_words;
  std::map<std::string, std::size_t> declared_images;
};

struct RotationFamily {
  std::vector<RotationPair> pairs;
};

struct FamilyValidation {
  bool used_declared_images = false;
  bool used_inferred_images = false;
  /// Generators whose translate of some member leaves the declared family;
  /// the small-cancellation check materializes those translates itself.
  std::vector<std::string> open_translates;
};

namespace detail {

inline Subspace translateSubspace(const Subspace& y, const Permutation& g) {
  std::vector<PointId> pts;
  pts.reserve(y.members.size());
  for (PointId p : y.members) pts.push_back(g[p]);
  return Subspace(std::move(pts));
}

inline std::set<Permutation> subgroupElements(const GroupAction& action,
                                              const std::vector<Word>& words, std::size_t cap,
                                              bool* closed) {
  std::vector<Permutation> alphabet;
  std::vector<std::string> letters;
  for (const Word& w : words) {
    Permutation p = action.evaluate(w);
    alphabet.push_back(p);
    letters.push_back(render_word(w, action));
    alphabet.push_back(GroupAction::inverse(p));
    letters.push_back(render_word(w, action) + "^-1");
  }
  GroupAction::Enumeration en = GroupAction::enumerateWords(
      GroupAction::identity(action.space().size()), alphabet, letters, cap, 200000);
  if (closed) *closed = en.closed;
  std::set<Permutation> out;
  for (const auto& el : en.elements) out.insert(el.perm);
  return out;
}

}  // namespace detail

/// Load-time validation of a rotation family: members pairwise distinct,
/// each subgroup preserves its member setwise, and the index action is
/// compatible (Y_{g i} = g Y_i and H_{g i} = g H_i g^-1). Declared images
/// are checked; missing ones are inferred when the translate matches a
/// unique member, and recorded as open otherwise.
inline FamilyValidation validate_rotation_family(const GroupAction& action,
                                                 const RotationFamily& family,
                                                 std::size_t cap = 12) {
  FamilyValidation out;
  const auto& pairs = family.pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      detail::require(!(pairs[i].subspace == pairs[j].subspace),
                      "rotation family members must be pairwise distinct");
  for (const RotationPair& p : pairs) {
    detail::require(!p.subgroup_words.empty(),
                    "rotation member '" + p.name + "' needs at least one subgroup word");
    for (const Word& w : p.subgroup_words) {
      Subspace image = detail::translateSubspace(p.subspace, action.evaluate(w));
      detail::require(image == p.subspace,
                      "subgroup word does not preserve member '" + p.name + "'");
    }
  }
  for (std::size_t g = 0; g < action.generatorCount(); ++g) {
    const std::string& gname = action.generatorName(g);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      Subspace image = detail::translateSubspace(pairs[i].subspace, action.generator(g));
      std::optional<std::size_t> target;
      auto declared = pairs[i].declared_images.find(gname);
      if (declared != pairs[i].declared_images.end()) {
        detail::require(declared->second < pairs.size(), "declared image index out of range");
        detail::require(pairs[declared->second].subspace == image,
                        "declared image of '" + pairs[i].name + "' under '" + gname +
                            "' does not equal the translate");
        target = declared->second;
        out.used_declared_images = true;
      } else {
        std::size_t matches = 0;
        for (std::size_t j = 0; j < pairs.size(); ++j)
          if (pairs[j].subspace == image) {
            target = j;
            ++matches;
          }
        detail::require(matches <= 1, "ambiguous translate; declare the index action explicitly");
        if (target) out.used_inferred_images = true;
      }
      if (!target) {
        out.open_translates.push_back(gname + ":" + pairs[i].name);
        continue;
      }
      bool ci = true, cj = true;
      std::set<Permutation> hi =
          detail::subgroupElements(action, pairs[i].subgroup_words, cap, &ci);
      std::set<Permutation> hj =
          detail::subgroupElements(action, pairs[*target].subgroup_words, cap, &cj);
      std::set<Permutation> conj;
      const Permutation& gp = action.generator(g);
      Permutation gpInv = GroupAction::inverse(gp);
      for (const Permutation& h : hi)
        conj.insert(GroupAction::compose(gp, GroupAction::compose(h, gpInv)));
      detail::require(!(ci && cj) || conj == hj,
                      "subgroup of '" + pairs[*target].name + "' is not the conjugate of '" +
                          pairs[i].name + "' under '" + gname + "'");
    }
  }
  return out;
}

struct SmallCancellationParams {
  double delta0 = 0.0;
  double Delta0 = 0.0;
  double r0 = 1.0;
  double epsilon = 0.05;
  std::size_t cap = 12;
  unsigned threads = 1;
  std::size_t radius_steps = ConeSpace::kDefaultRadiusSteps;
  std::uint64_t samples = kDefaultDeltaSamples;
  std::uint64_t seed = 1;
};

struct ConeAudit {
  std::string name;
  bool strongly_quasiconvex = false;
  std::optional<std::pair<PointId, PointId>> witness;
  bool rinj_has_nontrivial = false;
  double rinj_on_member = kInfinite;
  bool first_hyperbolicity_ok = true;  // rinj(H on Y) > 2 pi sinh r0
};

/// Everything the sc-check verdict reports.
struct SmallCancellationResult {
  DeltaResult delta;
  double Delta = 0.0;
  std::size_t translates = 0;
  bool translate_closure_capped = false;
  bool rho_zero = false;
  bool rho_finite = false;  // false also covers "no nontrivial element"
  double rho = kInfinite;
  std::string rho_witness;
  bool rho_boundary_flag = false;
  std::size_t cap = 0;
  double ratio_delta = 0.0;
  double ratio_Delta = 0.0;
  bool all_strongly_quasiconvex = true;
  bool pass = false;
  std::string fail_reason;
  bool r0_paper_constraint_ok = false;
  double rescale_factor = 1.0;
  bool rescale_applied = false;
  bool coneoff_built = false;
  std::size_t coneoff_points = 0;
  std::size_t local_balls = 0;
  double local_delta_max = 0.0;
  double local_target = 0.0;
  std::vector<ConeAudit> cones;
  FamilyValidation family_validation;
};

/// Hypothesis check for the very small cancellation theorem on a finite
/// model: delta and Delta over materialized translates against the supplied
/// thresholds, rho from the attached subgroups, and on a pass the local
/// hyperbolicity audit of the rescaled cone-off.
inline SmallCancellationResult small_cancellation_report(const GeodesicOracle& oracle,
                                                         const GroupAction& action,
                                                         const RotationFamily& family,
                                                         const SmallCancellationParams& params,
                                                         const std::vector<PointId>& boundary = {}) {
  detail::require(params.delta0 >= 0.0 && params.Delta0 >= 0.0, "thresholds must be non-negative");
  detail::require(params.r0 > 0.0, "cone radius must be positive");
  detail::require(params.epsilon > 0.0, "epsilon must be positive");
  SmallCancellationResult out;
  out.cap = params.cap;
  out.family_validation = validate_rotation_family(action, family, params.cap);

  const FiniteMetricSpace& X = oracle.metric();
  out.delta = four_point_delta(X, params.threads, params.samples, params.seed);
  const double delta = out.delta.delta;

  for (const RotationPair& p : family.pairs) {
    ConeAudit audit;
    audit.name = p.name;
    StrongQuasiConvexity sqc = is_strongly_quasiconvex(oracle, p.subspace, delta);
    audit.strongly_quasiconvex = sqc.holds;
    audit.witness = sqc.witness;
    if (!sqc.holds) out.all_strongly_quasiconvex = false;
    out.cones.push_back(std::move(audit));
  }

  // Translate closure: image of every member under each enumerated element.
  GroupAction::Enumeration en = action.enumerate(params.cap);
  out.translate_closure_capped = !en.closed;
  std::set<Subspace> translates;
  for (const RotationPair& p : family.pairs)
    for (const auto& el : en.elements)
      translates.insert(detail::translateSubspace(p.subspace, el.perm));
  std::vector<Subspace> translateList(translates.begin(), translates.end());
  out.translates = translateList.size();
  out.Delta = largest_piece(X, translateList, delta);

  // rho = min over members of the injectivity radius of the attached
  // subgroup on the whole space.
  bool sawNontrivial = false;
  double rho = kInfinite;
  for (std::size_t i = 0; i < family.pairs.size(); ++i) {
    InjectivityRadius ir =
        injectivity_radius(action, family.pairs[i].subgroup_words, params.cap, boundary);
    if (ir.has_nontrivial) {
      sawNontrivial = true;
      if (ir.value < rho) {
        rho = ir.value;
        out.rho_witness = ir.witness;
        out.rho_boundary_flag = ir.boundary_realized;
      }
    }
  }
  out.rho = rho;
  out.rho_finite = sawNontrivial;
  out.rho_zero = sawNontrivial && rho <= kSlack;

  out.r0_paper_constraint_ok = params.r0 > 1e6 * (std::log(3.0) + params.epsilon);

  if (out.rho_zero) {
    out.pass = false;
    out.fail_reason = "some subgroup element fixes a point (rho = 0); ratios undefined";
  } else {
    if (out.rho_finite) {
      out.ratio_delta = delta / rho;
      out.ratio_Delta = out.Delta / rho;
    } else {
      out.ratio_delta = 0.0;
      out.ratio_Delta = 0.0;
    }
    bool ratiosOk = out.ratio_delta <= params.delta0 + kSlack &&
                    out.ratio_Delta <= params.Delta0 + kSlack;
    out.pass = ratiosOk && out.all_strongly_quasiconvex;
    if (!out.all_strongly_quasiconvex)
      out.fail_reason = "a family member is not strongly quasi-convex";
    else if (!ratiosOk)
      out.fail_reason = "delta/rho or Delta/rho exceeds its threshold";
  }

  // Rescale so that rho becomes 2 pi sinh r0, then audit the cone-off.
  const double target = 2.0 * std::numbers::pi * std::sinh(params.r0);
  if (out.rho_finite && !out.rho_zero) {
    out.rescale_factor = target / rho;
    out.rescale_applied = true;
  }

  WeightedGraph auditGraph =
      out.rescale_applied ? rescale(oracle.graph(), out.rescale_factor) : oracle.graph();
  GeodesicOracle auditOracle(auditGraph);

  for (std::size_t i = 0; i < family.pairs.size(); ++i) {
    ConeAudit& audit = out.cones[i];
    bool closed = true;
    std::set<Permutation> elements =
        detail::subgroupElements(action, family.pairs[i].subgroup_words, params.cap, &closed);
    double rinj = kInfinite;
    bool nontrivial = false;
    for (const Permutation& h : elements) {
      bool trivial = true;
      for (PointId x = 0; x < h.size(); ++x)
        if (h[x] != x) {
          trivial = false;
          break;
        }
      if (trivial) continue;
      nontrivial = true;
      double best = kInfinite;
      for (PointId y : family.pairs[i].subspace.members)
        best = std::min(best, auditOracle.metric().at(y, h[y]));
      rinj = std::min(rinj, best);
    }
    audit.rinj_has_nontrivial = nontrivial;
    audit.rinj_on_member = rinj;
    audit.first_hyperbolicity_ok = !nontrivial || rinj > target;
  }

  if (out.pass) {
    std::vector<Subspace> familySubspaces;
    for (const RotationPair& p : family.pairs) familySubspaces.push_back(p.subspace);
    ConeOffSpace coneoff(auditOracle, familySubspaces, params.r0, params.radius_steps);
    out.coneoff_built = true;
    out.coneoff_points = coneoff.pointCount();
    out.local_target = std::log(3.0) + params.epsilon;

    // Four-point delta of every r0/9 ball whose base centre is at least
    // r0/2 away from all apexes.
    FiniteMetricSpace closure = coneoff.materialize(false);
    std::vector<double> apexDist(coneoff.pointCount(), kInfinite);
    for (std::size_t c = 0; c < coneoff.cones().size(); ++c) {
      std::vector<double> d = coneoff.chainDistancesFrom(coneoff.apexIndex(c));
      for (std::size_t p = 0; p < d.size(); ++p) apexDist[p] = std::min(apexDist[p], d[p]);
    }
    for (PointId x0 = 0; x0 < coneoff.base().size(); ++x0) {
      if (apexDist[x0] < params.r0 / 2.0) continue;
      std::vector<PointId> ball;
      for (std::size_t p = 0; p < coneoff.pointCount(); ++p)
        if (closure.at(x0, p) <= params.r0 / 9.0) ball.push_back(p);
      if (ball.size() < 4) continue;
      FiniteMetricSpace local = restrictTo(closure, ball);
      DeltaResult localDelta = four_point_delta(local, params.threads, params.samples, params.seed);
      out.local_delta_max = std::max(out.local_delta_max, localDelta.delta);
      ++out.local_balls;
    }
  }
  return out;
}

}  // namespace conekit
