// lamina: command-line front end. Exit codes: 0 success, 1 malformed input
// or other error, 2 hypothesis violation, 3 inconclusive for lack of
// resources.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lamina/automorphism.hpp"
#include "lamina/ball.hpp"
#include "lamina/config.hpp"
#include "lamina/error.hpp"
#include "lamina/extension.hpp"
#include "lamina/lab.hpp"
#include "lamina/report.hpp"
#include "lamina/subgroup.hpp"
#include "lamina/traintrack.hpp"
#include "lamina/word.hpp"

using namespace lamina;

namespace {

constexpr int kExitMalformed = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitResources = 3;

Automorphism load_automorphism(const std::string& path) {
  return Automorphism::parse(read_file(path));
}

// A map file, or an automorphism file read as a rose map.
MarkedGraphMap load_map(const std::string& path) {
  const std::string text = read_file(path);
  if (text.find("inverse:") != std::string::npos) {
    return MarkedGraphMap::rose(Automorphism::parse(text));
  }
  return MarkedGraphMap::parse(text);
}

int emit_reports(const std::vector<Report>& reports, const std::string& format,
                 const std::string& out) {
  for (const auto& path : emit(reports, parse_format(format), out)) {
    std::cout << "wrote " << path << "\n";
  }
  int code = 0;
  for (const Report& r : reports) {
    std::cout << r.kind << ": " << to_string(r.verdict) << "\n";
    for (const auto& n : r.notes) {
      std::cout << "  " << n << "\n";
    }
    if (r.resource_limited) {
      code = kExitResources;
    }
  }
  return code;
}

void print_profile(const DistortionProfile& p) {
  std::cout << "# " << p.subject << "\nR,count,disto\n";
  for (const auto& s : p.samples) {
    std::cout << s.radius << "," << s.count << "," << s.disto << (s.flagged ? " (lower bound)" : "")
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamina: free groups, train tracks and free-by-cyclic experiments"};
  app.require_subcommand(1);
  int code = 0;

  // word
  auto* word = app.add_subcommand("word", "reduce, invert, multiply and cyclically reduce words");
  std::string word_op;
  std::vector<std::string> word_args;
  int word_rank = 26;
  word->add_option("op", word_op, "reduce | inverse | product | cyclic")
      ->required()
      ->check(CLI::IsMember({"reduce", "inverse", "product", "cyclic"}));
  word->add_option("words", word_args, "words such as \"a b A\" or abA")->required();
  word->add_option("--rank", word_rank, "rank of the free group");
  word->callback([&] {
    std::vector<Word> ws;
    for (const auto& w : word_args) {
      ws.push_back(Word::parse(w, word_rank));
    }
    if (word_op == "product") {
      Word p;
      for (const Word& w : ws) {
        p = p * w;
      }
      std::cout << p.to_string() << "\n";
      return;
    }
    for (const Word& w : ws) {
      if (word_op == "reduce") {
        std::cout << w.to_string() << "\n";
      } else if (word_op == "inverse") {
        std::cout << w.inverse().to_string() << "\n";
      } else {
        const CyclicReduction c = cyclic_reduce(w);
        std::cout << c.core.to_string() << " conjugator " << c.conjugator.to_string() << "\n";
      }
    }
  });

  // aut
  auto* aut = app.add_subcommand("aut", "inspect an automorphism file");
  std::string aut_file;
  std::string aut_apply;
  int aut_iterate = 1;
  bool aut_verify = false;
  std::string aut_stretch;
  aut->add_option("file", aut_file, "automorphism file")->required();
  aut->add_option("--apply", aut_apply, "word to map");
  aut->add_option("--iterate", aut_iterate, "apply the automorphism n times (negative: inverse)");
  aut->add_flag("--verify", aut_verify, "check that the inverse block really inverts");
  aut->add_option("--stretch", aut_stretch,
                  "ratio c: whether max(|phi^n(h)|, |phi^-n(h)|) > c|h| for --apply, n = --iterate");
  aut->callback([&] {
    const Automorphism phi = load_automorphism(aut_file);
    if (aut_verify || aut_apply.empty()) {
      const InverseReport rep = verify_inverse(phi);
      std::cout << "inverse " << (rep.ok ? "verified" : "FAILS") << "\n";
      if (!rep.ok) {
        code = kExitMalformed;
      }
    }
    if (!aut_apply.empty()) {
      const Word w = Word::parse(aut_apply, phi.rank());
      const Word image =
          aut_iterate >= 0 ? iterate(phi, w, aut_iterate) : iterate(phi.inverse(), w, -aut_iterate);
      std::cout << image.to_string() << "\nlength " << image.size() << "\n";
      if (!aut_stretch.empty()) {
        const Ratio c = Ratio::parse(aut_stretch);
        std::cout << "stretched " << (stretch_check(phi, w, std::abs(aut_iterate), c) ? "yes" : "no") << "\n";
      }
    } else {
      std::cout << phi.to_string();
    }
  });

  // leaf
  auto* leaf = app.add_subcommand("leaf", "train-track data: matrix, eigenvalue, leaf segments");
  std::string leaf_file;
  std::string leaf_edge;
  int leaf_n = 0;
  std::size_t leaf_language_length = 0;
  leaf->add_option("file", leaf_file, "map file or automorphism file")->required();
  leaf->add_option("--edge", leaf_edge, "edge whose iterate to print");
  leaf->add_option("-n", leaf_n, "iteration count for --edge and --language");
  leaf->add_option("--language", leaf_language_length, "list leaf factors of this length");
  leaf->callback([&] {
    const MarkedGraphMap f = load_map(leaf_file);
    const TransitionMatrix m = transition_matrix(f);
    std::cout << "transition matrix\n" << m.to_string();
    const Primitivity p = is_primitive(m);
    std::cout << "primitive " << (p.primitive ? "yes, power " + std::to_string(*p.witness_power) : "no")
              << "\ntrain track " << (check_train_track(f) ? "yes" : "no") << "\n";
    if (p.primitive) {
      const PerronFrobenius pf = pf_data(m);
      std::cout.precision(12);
      std::cout << "eigenvalue " << pf.eigenvalue << "\n";
    }
    std::cout << "periodic directions:";
    for (const EigenRay& r : periodic_directions(f)) {
      std::cout << " " << f.path_to_string(EdgePath::from_reduced(std::vector<Letter>{r.direction}))
                << "(period " << r.period << ")";
    }
    std::cout << "\n";
    if (!leaf_edge.empty()) {
      const auto e = f.edge_by_name(leaf_edge);
      if (!e) {
        throw MalformedInput("no edge named '" + leaf_edge + "'");
      }
      const EdgePath seg = leaf_segment(f, Letter(*e, false), leaf_n);
      std::cout << "f^" << leaf_n << "(" << leaf_edge << ") = " << f.path_to_string(seg)
                << "\nlength " << seg.size() << "\n";
    }
    if (leaf_language_length > 0) {
      const LeafLanguage lang = leaf_language(f, leaf_language_length, leaf_n);
      std::cout << lang.factors.size() << " factors, stabilized at n=" << lang.stabilized_at
                << (lang.stable ? "" : " (not seen to repeat)") << "\n";
      for (const EdgePath& w : lang.factors) {
        std::cout << f.path_to_string(w) << "\n";
      }
    }
  });

  // subgroup
  auto* sub = app.add_subcommand("subgroup", "Stallings core graph queries");
  std::string sub_gens;
  int sub_rank = 0;
  std::vector<std::string> sub_member;
  std::string sub_conj;
  std::string sub_meet;
  std::string sub_carry;
  sub->add_option("generators", sub_gens, "comma separated generators, e.g. \"a^2, b, a b A\"")
      ->required();
  sub->add_option("--rank", sub_rank, "rank of the ambient free group")->required();
  sub->add_option("--member", sub_member, "test membership of these words");
  sub->add_option("--conjugate", sub_conj, "print the core of h^-1 <gens> h");
  sub->add_option("--intersect", sub_meet, "print the core of the intersection with <these>");
  sub->add_option("--carry", sub_carry, "longest factor of this word readable in the core");
  sub->callback([&] {
    const CoreGraph c = CoreGraph::fold(parse_word_list(sub_gens, sub_rank), sub_rank);
    const IndexReport idx = index(c);
    std::cout << c.to_string() << "index " << (idx.finite ? std::to_string(idx.value) : "infinite")
              << "\nrank " << c.subgroup_rank() << "\nbasis";
    for (const Word& w : c.basis()) {
      std::cout << " " << w.to_string();
    }
    std::cout << "\n";
    for (const auto& m : sub_member) {
      std::cout << m << ": " << (membership(c, Word::parse(m, sub_rank)) ? "member" : "not a member")
                << "\n";
    }
    if (!sub_conj.empty()) {
      std::cout << "conjugate\n" << conjugate_core(c, Word::parse(sub_conj, sub_rank)).to_string();
    }
    if (!sub_meet.empty()) {
      const CoreGraph k = CoreGraph::fold(parse_word_list(sub_meet, sub_rank), sub_rank);
      const IndexReport rel = relative_index(c, k);
      std::cout << "intersection\n" << fiber_product(c, k).to_string() << "index in second "
                << (rel.finite ? std::to_string(rel.value) : "infinite") << "\n";
    }
    if (!sub_carry.empty()) {
      std::cout << "carried " << longest_readable_factor(c, Word::parse(sub_carry, sub_rank))
                << "\n";
    }
  });

  // ball
  auto* ball = app.add_subcommand("ball", "sphere sizes of the mapping torus group");
  std::string ball_file;
  int ball_radius = 4;
  std::size_t ball_states = default_max_states();
  ball->add_option("file", ball_file, "automorphism file")->required();
  ball->add_option("-R,--radius", ball_radius, "radius")->check(CLI::Range(0, kMaxRadius));
  ball->add_option("--max-states", ball_states, "state cap (default LAMINA_MAX_STATES or 1e7)");
  ball->callback([&] {
    const Automorphism phi = load_automorphism(ball_file);
    const Ball b = build_ball(phi, ball_radius, {ball_states, true});
    std::cout << "R,count,sphere\n";
    for (int r = 0; r <= b.radius(); ++r) {
      std::cout << r << "," << b.count_within(r) << "," << b.count_at(r) << "\n";
    }
    if (!b.complete()) {
      std::cerr << "state cap reached; attained radius " << b.radius() << "\n";
      code = kExitResources;
    }
  });

  // distortion
  auto* dist = app.add_subcommand("distortion", "distortion profile of H or a subgroup");
  std::string dist_file;
  int dist_radius = 4;
  std::string dist_gens;
  std::size_t dist_states = default_max_states();
  dist->add_option("file", dist_file, "automorphism file")->required();
  dist->add_option("-R,--radius", dist_radius, "radius")->check(CLI::Range(0, kMaxRadius));
  dist->add_option("--gens", dist_gens, "subgroup generators (default: all of H)");
  dist->add_option("--max-states", dist_states, "state cap");
  dist->callback([&] {
    const Automorphism phi = load_automorphism(dist_file);
    const Subject s = dist_gens.empty()
                          ? Subject::whole()
                          : Subject::generated_by(dist_gens, parse_word_list(dist_gens, phi.rank()));
    const Ball b = build_ball(phi, dist_radius, {dist_states, true});
    print_profile(distortion_profile(s, b));
    if (!b.complete()) {
      std::cerr << "state cap reached; attained radius " << b.radius() << "\n";
      code = kExitResources;
    }
  });

  // experiments
  std::string config_file;
  std::string format = "json";
  std::string out_dir = "lamina-out";
  auto add_experiment = [&](const char* name, const char* help, const char* kind) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("config", config_file, "experiment config")->required();
    cmd->add_option("--format", format, "json | csv | text");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->callback([&, kind] {
      ExperimentConfig cfg = load_config(config_file);
      if (kind[0] != '\0') {
        cfg.experiments = {kind};
      }
      code = emit_reports(run_experiments(cfg), format, out_dir);
    });
  };
  add_experiment("filling", "carrying of leaves by subgroups", "filling");
  add_experiment("qc", "distortion and quasiconvexity", "qc");
  add_experiment("factor", "finite-index hits in conjugates of invariant factors", "factor");
  add_experiment("report", "run every experiment listed in the config", "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitMalformed;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const NotATrainTrack& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResources;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return code;
}
