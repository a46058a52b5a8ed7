#include "lamina/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <set>

#include <omp.h>

#include "lamina/ball.hpp"
#include "lamina/error.hpp"
#include "lamina/extension.hpp"
#include "lamina/subgroup.hpp"
#include "lamina/traintrack.hpp"

namespace lamina {

namespace {

std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join_words(const std::vector<Word>& ws) {
  std::string out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    out += (i ? ", " : "") + ws[i].to_string();
  }
  return out;
}

// Runs body(i) for i in [0, n) across threads and rethrows the first
// failure (lowest index) after the loop.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

nlohmann::json echo_inputs(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["hyperbolic"] = cfg.hyperbolic == Hyperbolicity::declared ? "declared" : "unknown";
  if (cfg.automorphism) {
    j["automorphism"] = cfg.automorphism->to_string();
  }
  auto subgroups = nlohmann::json::array();
  for (const auto& s : cfg.subgroups) {
    subgroups.push_back({{"name", s.name}, {"generators", join_words(s.generators)}});
  }
  j["subgroups"] = subgroups;
  auto factors = nlohmann::json::array();
  for (const auto& s : cfg.factors) {
    factors.push_back({{"name", s.name}, {"generators", join_words(s.generators)}});
  }
  j["factors"] = factors;
  j["caps"] = {{"n_max", cfg.n_max},
               {"r_max", cfg.r_max},
               {"conjugator_bound", cfg.conjugator_bound},
               {"witness_n", cfg.witness_n},
               {"witness_radius", cfg.witness_radius},
               {"depth_segments", cfg.depth_segments},
               {"plateau_window", cfg.plateau_window},
               {"residual_threshold", cfg.residual_threshold},
               {"fit_min_radius", cfg.fit_min_radius},
               {"max_states", cfg.max_states},
               {"intrinsic_cap", cfg.intrinsic_cap}};
  return j;
}

void require_primitive(const MarkedGraphMap& f, const std::string& what) {
  const Primitivity p = is_primitive(transition_matrix(f));
  if (!p.primitive) {
    throw HypothesisViolation("transition matrix of the " + what + " is not primitive");
  }
}

const Automorphism& require_automorphism(const ExperimentConfig& cfg, const char* experiment) {
  if (!cfg.automorphism) {
    throw MalformedInput(std::string(experiment) + ": an [automorphism] section is required");
  }
  return *cfg.automorphism;
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::inconsistent || b == Verdict::inconsistent) {
    return Verdict::inconsistent;
  }
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) {
    return Verdict::inconclusive;
  }
  return Verdict::consistent;
}

// ---- filling ---------------------------------------------------------------

struct Curve {
  std::string name;
  std::vector<std::size_t> segment;
  std::vector<std::size_t> carried;
  std::vector<Word> words;  // segment at each n, kept for counter-samples
};

std::vector<OrientedEdge> seed_edges(const ExperimentConfig& cfg, const MarkedGraphMap& f) {
  std::vector<OrientedEdge> seeds;
  if (cfg.seeds.empty()) {
    for (int e = 1; e <= f.edge_count(); ++e) {
      seeds.emplace_back(e, false);
    }
    return seeds;
  }
  for (const auto& name : cfg.seeds) {
    const auto e = f.edge_by_name(name);
    if (!e) {
      throw MalformedInput("seed '" + name + "' is not an edge of the map");
    }
    seeds.emplace_back(*e, false);
  }
  return seeds;
}

std::vector<Curve> carrying_curves(const MarkedGraphMap& f, const std::string& prefix,
                                   const std::vector<OrientedEdge>& seeds, int n_max) {
  std::vector<Curve> curves;
  for (OrientedEdge e : seeds) {
    Curve c;
    c.name = prefix + "leaf." + f.edge(e.generator()).name;
    EdgePath seg = EdgePath::from_reduced(std::vector<Letter>{e});
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) {
        seg = apply_map(f, seg);
      }
      c.words.push_back(f.to_word(seg));
    }
    curves.push_back(std::move(c));
  }
  for (const EigenRay& ray : periodic_directions(f)) {
    Curve c;
    const std::string dir = f.edge(ray.direction.generator()).name + (ray.direction.inverted() ? "^-1" : "");
    c.name = prefix + "eigenray." + dir;
    EdgePath seg = EdgePath::from_reduced(std::vector<Letter>{ray.direction});
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) {
        seg = apply_map(f, seg);
      }
      c.words.push_back(f.to_word(eigenray_prefix(f, ray, seg.size()).path));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

struct SubjectOutcome {
  Verdict verdict = Verdict::consistent;
  std::string note;
  std::optional<CounterSample> counter;
  std::vector<Table> tables;
  std::string summary;
};

SubjectOutcome filling_subject(const SubgroupSpec& sub, int rank, std::vector<Curve> curves,
                               int window) {
  SubjectOutcome out;
  const CoreGraph core = CoreGraph::fold(sub.generators, rank);
  const IndexReport idx = index(core);
  out.summary = idx.finite ? "finite index " + num(idx.value) : "infinite index";
  for (Curve& c : curves) {
    Table t{sub.name + "." + c.name, {"n", "segment_length", "carried_length"}, {}};
    for (std::size_t n = 0; n < c.words.size(); ++n) {
      c.segment.push_back(c.words[n].size());
      c.carried.push_back(longest_readable_factor(core, c.words[n]));
      t.add_row({num(n), num(c.segment[n]), num(c.carried[n])});
    }
    out.tables.push_back(std::move(t));
  }
  for (const Curve& c : curves) {
    const std::size_t last = c.words.size() - 1;
    if (idx.finite) {
      for (std::size_t n = 0; n <= last; ++n) {
        if (c.carried[n] != c.segment[n]) {
          out.verdict = Verdict::inconsistent;
          out.counter = CounterSample{"uncarried_segment", sub.name, sub.generators,
                                      c.words[n], -1, c.carried[n]};
          out.note = sub.name + ": finite index but " + c.name + " at n=" + num(n) +
                     " is not carried";
          return out;
        }
      }
      continue;
    }
    const std::size_t w = std::min<std::size_t>(std::max(window, 1), last + 1);
    const std::size_t value = c.carried[last];
    bool flat = true;
    for (std::size_t n = last + 1 - w; n <= last; ++n) {
      flat = flat && c.carried[n] == value;
    }
    if (flat && value < c.segment[last]) {
      continue;
    }
    if (value == c.segment[last] && c.segment[last] > 0) {
      out.verdict = Verdict::inconsistent;
      out.counter = CounterSample{"carried_segment", sub.name, sub.generators, c.words[last],
                                  -1, value};
      out.note = sub.name + ": infinite index yet " + c.name + " at n=" + num(last) +
                 " is carried in full";
      return out;
    }
    out.verdict = Verdict::inconclusive;
    out.note = sub.name + ": " + c.name + " has not plateaued by n=" + num(last);
  }
  return out;
}

// ---- quasiconvexity --------------------------------------------------------

Word power_word(const std::vector<Word>& gens, int k) {
  Word unit;
  for (const Word& g : gens) {
    unit = unit * g;
  }
  Word out;
  for (int i = 0; i < k; ++i) {
    out = out * unit;
  }
  return out;
}

void depth_rows(Table& t, const std::string& subject, const std::vector<Word>& segments,
                const Automorphism& phi, int radius, std::size_t max_states) {
  std::vector<GeodesicRealization> found(segments.size());
  parallel_for(segments.size(), [&](std::size_t i) {
    found[i] = geodesic_realization(segments[i], phi, radius, max_states);
  });
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& g = found[i];
    t.add_row({subject, segments[i].to_string(), num(segments[i].size()),
               g.length ? num(*g.length) : "", g.min_dist ? num(*g.min_dist) : ""});
  }
}

// ---- factor ----------------------------------------------------------------

// Restriction of phi to a factor generated by letters, as a transition
// matrix over those letters.
std::optional<TransitionMatrix> letter_restriction(const std::vector<Word>& images,
                                                   const std::vector<Word>& gens) {
  std::vector<int> letters;
  for (const Word& g : gens) {
    if (g.size() != 1 || g[0].inverted()) {
      return std::nullopt;
    }
    letters.push_back(g[0].generator());
  }
  const int n = static_cast<int>(letters.size());
  TransitionMatrix m(n);
  for (int j = 0; j < n; ++j) {
    for (Letter x : images[letters[j] - 1]) {
      const auto it = std::find(letters.begin(), letters.end(), x.generator());
      if (it == letters.end()) {
        return std::nullopt;
      }
      ++m.at(static_cast<int>(it - letters.begin()), j);
    }
  }
  return m;
}

void check_factor(const Automorphism& phi, const SubgroupSpec& k, std::vector<std::string>& notes) {
  const CoreGraph core = CoreGraph::fold(k.generators, phi.rank());
  for (const Word& g : k.generators) {
    if (!membership(core, apply(phi, g)) || !membership(core, apply(phi.inverse(), g))) {
      throw HypothesisViolation("factor " + k.name + " is not invariant: image of " +
                                g.to_string() + " leaves it");
    }
  }
  const auto fwd = letter_restriction(phi.images(), k.generators);
  const auto bwd = letter_restriction(phi.inverse_images(), k.generators);
  if (!fwd || !bwd) {
    notes.push_back("factor " + k.name +
                    ": restriction is not a positive letter map; aperiodicity not checked");
    return;
  }
  if (!is_primitive(*fwd).primitive || !is_primitive(*bwd).primitive) {
    throw HypothesisViolation("restriction of the automorphism to factor " + k.name +
                              " is not aperiodic");
  }
}

struct Hit {
  Word conjugator;
  std::size_t index = 0;
};

}  // namespace

Report run_filling(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.subgroups.empty()) {
    throw MalformedInput("filling: no [subgroup] sections");
  }
  const MarkedGraphMap f = cfg.leaf_map();
  require_primitive(f, "map");
  if (!check_train_track(f)) {
    throw HypothesisViolation("the map is not a train track");
  }
  std::vector<Curve> curves = carrying_curves(f, "", seed_edges(cfg, f), cfg.n_max);
  if (cfg.inverse_map) {
    require_primitive(*cfg.inverse_map, "inverse map");
    if (!check_train_track(*cfg.inverse_map)) {
      throw HypothesisViolation("the inverse map is not a train track");
    }
    auto back = carrying_curves(*cfg.inverse_map, "inverse.", seed_edges(cfg, *cfg.inverse_map),
                                cfg.n_max);
    curves.insert(curves.end(), back.begin(), back.end());
  }

  Report r;
  r.kind = "filling";
  r.inputs = echo_inputs(cfg);
  std::vector<SubjectOutcome> outcomes(cfg.subgroups.size());
  parallel_for(cfg.subgroups.size(), [&](std::size_t i) {
    outcomes[i] = filling_subject(cfg.subgroups[i], cfg.rank(), curves, cfg.plateau_window);
  });

  Table summary{"summary", {"subgroup", "generators", "index", "verdict"}, {}};
  r.verdict = Verdict::consistent;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    summary.add_row({cfg.subgroups[i].name, join_words(cfg.subgroups[i].generators), o.summary,
                     to_string(o.verdict)});
    for (auto& t : o.tables) {
      r.tables.push_back(std::move(t));
    }
    if (!o.note.empty()) {
      r.notes.push_back(o.note);
    }
    if (o.counter && !r.counter_sample) {
      r.counter_sample = o.counter;
    }
    r.verdict = worst(r.verdict, o.verdict);
  }
  r.tables.insert(r.tables.begin(), std::move(summary));
  return r;
}

Report run_quasiconvexity(const ExperimentConfig& cfg) {
  cfg.validate();
  const Automorphism& phi = require_automorphism(cfg, "qc");
  Report r;
  r.kind = "qc";
  r.inputs = echo_inputs(cfg);

  const Ball ball = build_ball(phi, cfg.r_max, {cfg.max_states, true});
  const int radius = ball.radius();
  if (!ball.complete()) {
    r.resource_limited = true;
    r.notes.push_back("ball stopped at radius " + num(radius) + " of " + num(cfg.r_max) +
                      " (state cap " + num(cfg.max_states) + ")");
  }

  std::vector<Subject> subjects{Subject::whole("H")};
  for (const auto& s : cfg.subgroups) {
    subjects.push_back(Subject::generated_by(s.name, s.generators));
  }
  std::vector<DistortionProfile> profiles(subjects.size());
  parallel_for(subjects.size(), [&](std::size_t i) {
    profiles[i] = distortion_profile(subjects[i], ball, cfg.intrinsic_cap);
  });

  Table fits{"fits", {"subject", "index", "slope", "intercept", "relative_residual", "linear"}, {}};
  bool subgroups_linear = true;
  std::optional<CounterSample> counter;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const auto& p = profiles[i];
    Table t{"profile." + p.subject, {"R", "count", "disto"}, {}};
    std::vector<double> xs;
    std::vector<double> ys;
    bool flagged = false;
    for (const auto& s : p.samples) {
      t.add_row({num(s.radius), num(s.count), num(s.disto)});
      if (s.radius >= cfg.fit_min_radius) {
        xs.push_back(s.radius);
        ys.push_back(static_cast<double>(s.disto));
        flagged = flagged || s.flagged;
      }
      if (s.flagged) {
        r.notes.push_back(p.subject + ": intrinsic length beyond cap at R=" + num(s.radius) +
                          "; disto is a lower bound");
      }
    }
    r.tables.push_back(std::move(t));
    std::string index_text = "whole";
    bool infinite = false;
    if (!subjects[i].whole_group) {
      const IndexReport idx = index(CoreGraph::fold(subjects[i].generators, phi.rank()));
      infinite = !idx.finite;
      index_text = idx.finite ? num(idx.value) : "infinite";
    }
    if (xs.size() < 2) {
      fits.add_row({p.subject, index_text, "", "", "", "too few samples"});
      if (infinite) {
        subgroups_linear = false;
      }
      continue;
    }
    const LinearFit fit = fit_linear(xs, ys);
    const bool linear = fit.relative_residual < cfg.residual_threshold && !flagged;
    fits.add_row({p.subject, index_text, fixed(fit.slope), fixed(fit.intercept),
                  fixed(fit.relative_residual), linear ? "yes" : "no"});
    if (infinite && !linear) {
      subgroups_linear = false;
      if (!counter && !flagged && !p.samples.empty()) {
        const auto& last = p.samples.back();
        counter = CounterSample{"distorted_subgroup", p.subject, subjects[i].generators,
                                last.witness, last.radius, last.disto};
      }
    }
  }
  r.tables.push_back(std::move(fits));

  Table witness{"witness", {"n", "h_length", "g_bound", "g_exact", "ratio", "ball_disto"}, {}};
  std::vector<double> ratios;
  const DistortionProfile& whole = profiles.front();
  for (int n = 0; n <= cfg.witness_n; ++n) {
    const WitnessRecord w = witness_distortion(phi, n, cfg.witness_radius);
    if (!w.certified) {
      throw Error("witness t^n a t^-n failed to normalize to phi^n(a) at n=" + num(n));
    }
    const double ratio = static_cast<double>(w.h_length) / w.g_bound;
    ratios.push_back(ratio);
    std::string disto;
    if (w.g_bound <= radius) {
      disto = num(whole.samples[w.g_bound].disto);
    }
    witness.add_row({num(n), num(w.h_length), num(w.g_bound), w.g_exact ? num(*w.g_exact) : "",
                     fixed(ratio), disto});
  }
  r.tables.push_back(std::move(witness));
  const std::size_t win =
      std::min<std::size_t>(std::max(cfg.plateau_window, 2), ratios.size());
  bool super_linear = ratios.size() >= 2 && ratios.back() > 1.0;
  for (std::size_t i = ratios.size() - win + 1; i < ratios.size(); ++i) {
    super_linear = super_linear && ratios[i] > ratios[i - 1];
  }

  Table depth{"depth", {"subject", "segment", "h_length", "g_length", "min_dist"}, {}};
  const int search = cfg.r_max + 2;
  std::vector<Word> leaf;
  for (int k = 1; k <= cfg.depth_segments; ++k) {
    leaf.push_back(iterate(phi, Word::generator(1), k));
  }
  depth_rows(depth, "H", leaf, phi, search, cfg.max_states);
  for (const auto& s : cfg.subgroups) {
    std::vector<Word> segs;
    for (int k = 1; k <= cfg.depth_segments; ++k) {
      segs.push_back(power_word(s.generators, k));
    }
    depth_rows(depth, s.name, segs, phi, search, cfg.max_states);
  }
  r.tables.push_back(std::move(depth));

  if (r.resource_limited) {
    r.verdict = Verdict::inconclusive;
  } else if (cfg.hyperbolic != Hyperbolicity::declared) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("hyperbolicity not declared; profiles reported without a verdict");
  } else if (!subgroups_linear && counter) {
    r.verdict = Verdict::inconsistent;
    r.counter_sample = counter;
    r.notes.push_back(counter->subject + " does not fit linear growth");
  } else if (!subgroups_linear) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("some subgroup profile could not be fitted");
  } else if (!super_linear) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("witness sequence is not super-linear within n <= " + num(cfg.witness_n));
  } else {
    r.verdict = Verdict::consistent;
  }
  return r;
}

Report run_factor(const ExperimentConfig& cfg) {
  cfg.validate();
  const Automorphism& phi = require_automorphism(cfg, "factor");
  if (cfg.factors.empty()) {
    throw MalformedInput("factor: no [factor] sections");
  }
  if (cfg.subgroups.empty()) {
    throw MalformedInput("factor: no [subgroup] sections");
  }
  Report r;
  r.kind = "factor";
  r.inputs = echo_inputs(cfg);
  for (const auto& k : cfg.factors) {
    check_factor(phi, k, r.notes);
  }

  const int rank = phi.rank();
  const std::vector<Word> conjugators = reduced_words_up_to(rank, cfg.conjugator_bound);
  Table hits{"hits", {"subgroup", "factor", "conjugator", "relative_index"}, {}};
  Table search{"search", {"subgroup", "factor", "conjugates_examined", "hits"}, {}};
  Table verdicts{"verdicts", {"subgroup", "verdict"}, {}};
  r.verdict = Verdict::consistent;

  for (const auto& sub : cfg.subgroups) {
    const CoreGraph h1 = CoreGraph::fold(sub.generators, rank);
    std::size_t total_hits = 0;
    for (const auto& k : cfg.factors) {
      const CoreGraph kcore = CoreGraph::fold(k.generators, rank);
      std::vector<CoreGraph> conj;
      std::set<std::string> seen;
      std::vector<Word> reps;
      for (const Word& h : conjugators) {
        CoreGraph c = conjugate_core(kcore, h);
        if (seen.insert(c.to_string()).second) {
          conj.push_back(std::move(c));
          reps.push_back(h);
        }
      }
      std::vector<IndexReport> rel(conj.size());
      parallel_for(conj.size(), [&](std::size_t i) { rel[i] = relative_index(h1, conj[i]); });
      std::size_t found = 0;
      for (std::size_t i = 0; i < conj.size(); ++i) {
        if (rel[i].finite) {
          hits.add_row({sub.name, k.name, reps[i].to_string(), num(rel[i].value)});
          ++found;
        }
      }
      search.add_row({sub.name, k.name, num(conj.size()), num(found)});
      total_hits += found;
    }
    const Verdict v = total_hits ? Verdict::consistent : Verdict::inconclusive;
    verdicts.add_row({sub.name, total_hits ? "consistent" : "inconclusive-by-bound"});
    if (!total_hits) {
      r.notes.push_back(sub.name + ": no finite-index hit with conjugators of length <= " +
                        num(cfg.conjugator_bound));
    }
    r.verdict = worst(r.verdict, v);
  }
  r.tables.push_back(std::move(hits));
  r.tables.push_back(std::move(search));
  r.tables.push_back(std::move(verdicts));
  return r;
}

std::vector<Report> run_experiments(const ExperimentConfig& cfg) {
  if (cfg.experiments.empty()) {
    throw Error("nothing to run: the config lists no experiments");
  }
  std::vector<Report> reports;
  for (const auto& e : cfg.experiments) {
    if (e == "filling") {
      reports.push_back(run_filling(cfg));
    } else if (e == "qc") {
      reports.push_back(run_quasiconvexity(cfg));
    } else if (e == "factor") {
      reports.push_back(run_factor(cfg));
    } else {
      throw MalformedInput("unknown experiment '" + e + "'");
    }
  }
  return reports;
}

bool replay(const CounterSample& s, const ExperimentConfig& cfg) {
  const int rank = cfg.rank();
  const CoreGraph core = CoreGraph::fold(s.subject_generators, rank);
  if (s.kind == "carried_segment") {
    return !index(core).finite && longest_readable_factor(core, s.word) == s.word.size() &&
           s.value == s.word.size();
  }
  if (s.kind == "uncarried_segment") {
    const std::size_t carried = longest_readable_factor(core, s.word);
    return index(core).finite && carried < s.word.size() && carried == s.value;
  }
  if (s.kind == "distorted_subgroup") {
    if (!cfg.automorphism || !membership(core, s.word)) {
      return false;
    }
    const GLength d = g_length(NormalForm{0, s.word}, *cfg.automorphism, s.radius, cfg.max_states);
    IntrinsicMetric metric(s.subject_generators, rank, cfg.intrinsic_cap);
    const auto len = metric.length(s.word);
    return d.value && *d.value <= s.radius && len && *len == s.value;
  }
  return false;
}

}  // namespace lamina
