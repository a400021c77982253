#pragma once

// Command-line front end: params, build, ric, addcomb {energy,diffset,propc,ess,bsg}
// and replay. Human-readable tables go to stdout; JSON goes to --out (plus a
// "<out>.manifest.json" replay record) or to stdout alone with --json.

#include <charconv>
#include <functional>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ripchirp/addcomb.hpp"
#include "ripchirp/chirp_io.hpp"
#include "ripchirp/construction.hpp"
#include "ripchirp/json_out.hpp"
#include "ripchirp/params.hpp"
#include "ripchirp/ric.hpp"

namespace ripchirp::cli {

inline constexpr const char* kToolVersion = "ripchirp 1.0.0";

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kNoFeasible = 2,
  kCapacity = 3,
  kDegenerate = 4,
  kTooManySupports = 5,
  kSetPrecondition = 6,
  kUsage = 64,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoFeasibleM: return kNoFeasible;
    case ErrorCode::CapacityExceeded: return kCapacity;
    case ErrorCode::DegenerateSet: return kDegenerate;
    case ErrorCode::TooManySupports: return kTooManySupports;
    case ErrorCode::ZeroInB:
    case ErrorCode::SizeOrderViolated: return kSetPrecondition;
    default: return kFailure;
  }
}

inline u64 parse_u64(std::string_view s) {
  u64 v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw UsageError("not a non-negative integer: '" + std::string(s) + "'");
  return v;
}

/// "0,1,2", "1..10", "1..3,7" or "@path" (whitespace/comma separated file of the same items).
inline std::vector<u64> parse_set_spec(const std::string& spec) {
  std::string text = spec;
  if (!spec.empty() && spec.front() == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw UsageError("cannot read set file " + spec.substr(1));
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    for (char& c : text)
      if (std::isspace(static_cast<unsigned char>(c))) c = ',';
  }
  std::vector<u64> values;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const u64 lo = parse_u64(std::string_view(item).substr(0, dots));
      const u64 hi = parse_u64(std::string_view(item).substr(dots + 2));
      if (lo > hi) throw UsageError("empty range " + item);
      if (hi - lo > (u64{1} << 26)) throw UsageError("range too long: " + item);
      for (u64 x = lo; x <= hi; ++x) values.push_back(x);
    } else {
      values.push_back(parse_u64(item));
    }
  }
  if (values.empty()) throw UsageError("empty set specification '" + spec + "'");
  return values;
}

struct DigitSpec {
  u64 M = 0;
  u64 r = 0;
};

/// "M=4,r=3".
inline DigitSpec parse_generator(const std::string& spec) {
  DigitSpec d;
  std::stringstream items(spec);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("generator items look like M=4,r=3");
    const auto key = item.substr(0, eq);
    const u64 value = parse_u64(std::string_view(item).substr(eq + 1));
    if (key == "M") {
      d.M = value;
    } else if (key == "r") {
      d.r = value;
    } else {
      throw UsageError("unknown generator key '" + key + "'");
    }
  }
  if (d.M == 0 || d.r == 0) throw UsageError("generator needs both M and r");
  return d;
}

inline std::string fmt(double d, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << d;
  return s.str();
}

namespace detail {

inline PrimeModulus prime_arg(u64 p) {
  if (p < 3 || p >= kMaxModulus || !is_prime(p)) throw UsageError("--p must be an odd prime below 2^62");
  return PrimeModulus(p);
}

/// Options of the leaf subcommand as name -> value, defaults included.
inline Json normalized_inputs(const CLI::App& leaf) {
  Json inputs = Json::object();
  for (const CLI::Option* opt : leaf.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--out" || name == "--json" || name.empty()) continue;
    if (opt->get_expected_min() == 0) {
      inputs[name] = opt->count() > 0 ? "true" : "false";
      continue;
    }
    const std::string value = opt->count() > 0 ? opt->results().front() : opt->get_default_str();
    if (!value.empty()) inputs[name] = value;
  }
  return inputs;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path);
}

inline void write_manifest(const std::string& command, const CLI::App& leaf, const std::string& out_path) {
  const Json inputs = normalized_inputs(leaf);
  Json manifest{{"command", command}, {"inputs", inputs}};
  manifest["seed"] = inputs.contains("--seed") ? Json(parse_u64(inputs["--seed"].get<std::string>())) : Json(nullptr);
  manifest["tool_version"] = kToolVersion;
  manifest["outputs"] = Json::array({out_path});
  write_text(out_path + ".manifest.json", dump_json(manifest));
}

}  // namespace detail

/// Runs one CLI invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit chirp RIP matrices: parameter calculus, construction and verification", "ripchirp"};
  app.require_subcommand(1);
  std::string out_path;
  bool json_stdout = false;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write the JSON result (and a replay manifest) to this path");
    sub->add_flag("--json", json_stdout, "Print JSON to standard output instead of a table");
  };

  // params
  auto* params = app.add_subcommand("params", "Parameter calculus for one m, or a sweep over even m");
  u64 m = 0, m_min = 100, m_max = 20000;
  bool optimize = false;
  CombinatorialConstants consts;
  params->add_option("--m", m, "Even integer m");
  params->add_flag("--optimize", optimize, "Sweep every even m in [m-min, m-max]");
  params->add_option("--m-min", m_min, "Sweep start")->capture_default_str();
  params->add_option("--m-max", m_max, "Sweep end")->capture_default_str();
  params->add_option("--c0", consts.c0, "Sum-product energy exponent")->default_str(fmt(consts.c0, 17));
  params->add_option("--c1", consts.c1, "BSG difference-set exponent")->default_str(fmt(consts.c1, 17));
  params->add_option("--c4", consts.c4, "BSG size exponent")->default_str(fmt(consts.c4, 17));
  add_output(params);

  // build
  auto* build = app.add_subcommand("build", "Construct the chirp matrix and write it in CHIRP1 format");
  u64 p_arg = 0, k_arg = 0, N = 0, build_m = 0;
  double eps = 0.0;
  bool real = false;
  build->add_option("--p", p_arg, "Prime modulus");
  build->add_option("--k", k_arg, "Target order; picks the smallest prime in [k^(2-eps), 2k^(2-eps)]");
  build->add_option("--eps", eps, "Order gain eps (prime selection and capacity check)")->default_str(fmt(eps, 17));
  build->add_option("--m", build_m, "Even integer m")->required();
  build->add_option("--N", N, "Number of columns")->required();
  build->add_flag("--real", real, "Write the 2n x 2N real block form");
  build->add_option("--out", out_path, "Output matrix path")->required();

  // ric
  auto* ric = app.add_subcommand("ric", "Restricted isometry constant of a CHIRP1 matrix");
  std::string matrix_path, mode = "exhaustive";
  std::size_t ric_k = 0;
  u64 trials = 1000, seed = 0;
  unsigned workers = 1;
  ric->add_option("--matrix", matrix_path, "CHIRP1 matrix file")->required();
  ric->add_option("--k", ric_k, "Sparsity order")->required();
  ric->add_option("--mode", mode, "exhaustive | sample")->check(CLI::IsMember({"exhaustive", "sample"}))->capture_default_str();
  ric->add_option("--trials", trials, "Random supports in sample mode")->capture_default_str();
  ric->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  ric->add_option("--workers", workers, "Worker threads (does not affect the result)");
  add_output(ric);

  // addcomb
  auto* addcomb = app.add_subcommand("addcomb", "Additive-combinatorics experiments");
  addcomb->require_subcommand(1);
  u64 ac_p = 0;
  std::string set_a, set_b, b_gen, bsg_mode = "exhaustive";
  double c0 = 1.0 / 3.0, c1 = 3.5, c4 = 0.75;
  std::optional<double> c5, gamma;
  u64 samples = 0, sample_size = 0, budget = 100000;
  auto add_p = [&](CLI::App* sub) { sub->add_option("--p", ac_p, "Prime modulus")->required(); };
  auto* energy_cmd = addcomb->add_subcommand("energy", "Additive energy E(A, B)");
  add_p(energy_cmd);
  energy_cmd->add_option("--A", set_a, "Set A")->required();
  energy_cmd->add_option("--B", set_b, "Set B")->required();
  add_output(energy_cmd);
  auto* diff_cmd = addcomb->add_subcommand("diffset", "Difference set A - B");
  add_p(diff_cmd);
  diff_cmd->add_option("--A", set_a, "Set A")->required();
  diff_cmd->add_option("--B", set_b, "Set B")->required();
  add_output(diff_cmd);
  auto* propc_cmd = addcomb->add_subcommand("propc", "Sum over b in B of E(A, b.A), normalized");
  add_p(propc_cmd);
  propc_cmd->add_option("--A", set_a, "Set A")->required();
  propc_cmd->add_option("--B", set_b, "Set B (0 not allowed, |B| <= |A|)")->required();
  propc_cmd->add_option("--c0", c0, "Normalization exponent")->default_str(fmt(c0, 17));
  add_output(propc_cmd);
  auto* ess_cmd = addcomb->add_subcommand("ess", "E(S,S)/|S|^3 for S = B or random subsets of B");
  add_p(ess_cmd);
  ess_cmd->add_option("--B", set_b, "Set B");
  ess_cmd->add_option("--B-gen", b_gen, "Digit generator, e.g. M=4,r=3");
  ess_cmd->add_option("--samples", samples, "Number of random subsets (0: use B itself)")->capture_default_str();
  ess_cmd->add_option("--size", sample_size, "Subset size");
  ess_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  ess_cmd->add_option("--c5", c5, "Check E(S,S) <= c5 p^-gamma |S|^3");
  ess_cmd->add_option("--gamma", gamma, "Exponent for the check");
  add_output(ess_cmd);
  auto* bsg_cmd = addcomb->add_subcommand("bsg", "Search for a Balog-Szemeredi-Gowers witness pair");
  add_p(bsg_cmd);
  bsg_cmd->add_option("--A", set_a, "Set A")->required();
  bsg_cmd->add_option("--c1", c1, "Difference-set exponent")->default_str(fmt(c1, 17));
  bsg_cmd->add_option("--c4", c4, "Size exponent")->default_str(fmt(c4, 17));
  bsg_cmd->add_option("--budget", budget, "Subset pairs to examine")->capture_default_str();
  bsg_cmd->add_option("--mode", bsg_mode, "exhaustive | random")->check(CLI::IsMember({"exhaustive", "random"}))->capture_default_str();
  bsg_cmd->add_option("--seed", seed, "Seed for random mode")->capture_default_str();
  add_output(bsg_cmd);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  std::string manifest_path, replay_out;
  replay->add_option("--manifest", manifest_path, "Manifest file")->required();
  replay->add_option("--out", replay_out, "Output path (default: the recorded one)");

  std::vector<const char*> argv{"ripchirp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  // Emits `result`, then writes the manifest when the JSON went to a file.
  auto emit = [&](const Json& result, const std::string& command, const CLI::App& leaf,
                  const std::function<void()>& table) {
    const std::string text = dump_json(result);
    if (json_stdout) {
      out << text;
    } else {
      table();
    }
    if (!out_path.empty()) {
      detail::write_text(out_path, text);
      detail::write_manifest(command, leaf, out_path);
    }
  };

  try {
    if (*params) {
      if (optimize) {
        const auto sweep = optimize_m(m_min, m_max, consts);
        Json rows = Json::array();
        for (const auto& r : sweep.table) {
          rows.push_back(Json{{"m", r.m}, {"gamma", r.gamma}, {"eps1", r.eps1}, {"eps", r.eps},
                              {"feasible", r.feasible()}});
        }
        Json result{{"mode", "optimize"},
                    {"m_min", m_min},
                    {"m_max", m_max},
                    {"c0", consts.c0},
                    {"c1", consts.c1},
                    {"c4", consts.c4},
                    {"best", to_json(sweep.best)},
                    {"sweep", rows}};
        emit(result, "params", *params, [&] {
          out << "swept " << sweep.table.size() << " even m in [" << m_min << ", " << m_max << "]\n"
              << "argmax m   " << sweep.best.m << "\n"
              << "gamma      " << fmt(sweep.best.gamma) << "\n"
              << "eps1       " << fmt(sweep.best.eps1) << "\n"
              << "eps        " << fmt(sweep.best.eps) << "\n";
        });
        return kOk;
      }
      if (params->count("--m") == 0) throw UsageError("params needs --m or --optimize");
      if (m < 2 || m % 2 != 0) throw UsageError("--m must be an even integer >= 2");
      const auto rep = parameter_report(m, consts);
      emit(to_json(rep), "params", *params, [&] {
        const auto bounds = tau_bounds(rep.log2M);
        out << "m              " << rep.m << "\n"
            << "log2 M         " << fmt(rep.log2M, 12) << "\n"
            << "tau            " << fmt(rep.tau, 15) << "\n"
            << "2tau-1         " << fmt(rep.two_tau_minus_1) << "  (bounds " << fmt(bounds.lo) << " .. "
            << fmt(bounds.hi) << ")\n"
            << "gamma          " << fmt(rep.gamma) << "  (<= 1/(4m): " << (rep.feasible_gamma ? "yes" : "no") << ")\n"
            << "eps1           " << fmt(rep.eps1) << "\n"
            << "eps            " << fmt(rep.eps) << "  (<= 1/(403m): " << (rep.feasible_eps ? "yes" : "no") << ")\n";
      });
      return rep.feasible() ? kOk : kNoFeasible;
    }

    if (*build) {
      const bool by_prime = build->count("--p") > 0;
      const bool by_order = build->count("--k") > 0;
      if (by_prime == by_order) throw UsageError("build needs exactly one of --p or --k");
      if (build_m < 2 || build_m % 2 != 0) throw UsageError("--m must be an even integer >= 2");
      const PrimeModulus p = by_prime ? detail::prime_arg(p_arg) : select_prime_for_k(k_arg, eps);
      const auto A = build_set_A(p, build_m);
      const auto B = build_set_B(p, build_m);
      const auto cap = capacity_check(p, build_m, eps, N);
      const auto chirp = build_matrix(A, B, N);
      const auto mat = chirp.materialize();
      std::size_t rows = mat.rows(), cols = mat.cols();
      if (real) {
        const auto rm = realify(mat);
        rows = rm.rows();
        cols = rm.cols();
        save_chirp1(out_path, rm);
      } else {
        save_chirp1(out_path, mat);
      }
      detail::write_manifest("build", *build, out_path);
      out << "p      " << p.value() << "\n"
          << "n x N  " << rows << " x " << cols << (real ? " (real)" : " (complex)") << "\n"
          << "|A|    " << A.size() << "\n"
          << "|B|    " << B.size() << "\n"
          << "capacity |A||B| = " << cap.capacity << "\n"
          << "eps <= 1/(403m): " << (cap.eps_ok ? "yes" : "no") << "  (limit " << fmt(cap.eps_limit) << ")\n"
          << "N <= p^((2+eps)/(2-eps)): " << (cap.N_below_power ? "yes" : "no") << "  (" << fmt(cap.power) << ")\n"
          << "p^((2+eps)/(2-eps)) <= |A||B|: " << (cap.power_below_capacity ? "yes" : "no") << "\n";
      return kOk;
    }

    if (*ric) {
      const auto mat = as_complex(load_chirp1(matrix_path));
      const auto est = mode == "exhaustive" ? ric_exhaustive(mat, ric_k, workers)
                                            : ric_sampled(mat, ric_k, trials, seed, workers);
      emit(to_json(est), "ric", *ric, [&] {
        out << "k                  " << est.k << "\n"
            << "delta_lower        " << fmt(est.delta_lower, 15) << "\n"
            << "method             " << to_string(est.method) << "\n"
            << "supports examined  " << est.supports_examined << "\n";
      });
      return kOk;
    }

    if (*addcomb) {
      const PrimeModulus p = detail::prime_arg(ac_p);
      auto set_of = [&](const std::string& spec) { return ResidueSet(p, parse_set_spec(spec)); };
      if (*energy_cmd) {
        const auto A = set_of(set_a), B = set_of(set_b);
        const auto e = energy(A, B);
        emit(Json{{"p", p.value()}, {"size_A", e.size_a}, {"size_B", e.size_b}, {"energy", e.value}},
             "addcomb energy", *energy_cmd, [&] { out << e.value << "\n"; });
        return kOk;
      }
      if (*diff_cmd) {
        const auto D = difference_set(set_of(set_a), set_of(set_b));
        emit(Json{{"p", p.value()}, {"size", D.size()}, {"elements", to_json(D)}}, "addcomb diffset", *diff_cmd, [&] {
          out << "|A - B| = " << D.size() << "\n";
        });
        return kOk;
      }
      if (*propc_cmd) {
        const auto res = prop_c_sum(set_of(set_a), set_of(set_b), c0);
        emit(Json{{"p", p.value()}, {"lhs", res.lhs}, {"c0", res.c0}, {"scale", res.scale}, {"ratio", res.ratio}},
             "addcomb propc", *propc_cmd, [&] {
               out << "sum E(A, b.A)  " << res.lhs << "\n"
                   << "scale          " << fmt(res.scale, 15) << "\n"
                   << "ratio          " << fmt(res.ratio, 15) << "\n";
             });
        return kOk;
      }
      if (*ess_cmd) {
        if (set_b.empty() == b_gen.empty()) throw UsageError("ess needs exactly one of --B or --B-gen");
        std::optional<ResidueSet> B;
        if (!b_gen.empty()) {
          const auto g = parse_generator(b_gen);
          B.emplace(build_set_B_explicit(g.M, g.r, p));
        } else {
          B.emplace(set_of(set_b));
        }
        if (c5.has_value() != gamma.has_value()) throw UsageError("--c5 and --gamma go together");
        Json rows = Json::array();
        double worst = 0.0;
        bool all_ok = true;
        auto record = [&](const ResidueSet& S, std::optional<u64> index) {
          const auto r = ess_ratio(S);
          Json row{{"size", r.size}, {"energy", r.energy}, {"ratio", r.ratio}, {"large_enough", r.large_enough}};
          if (index) row["sample"] = *index;
          if (c5) {
            const bool ok = r.satisfies(*c5, *gamma, p.value());
            row["within_bound"] = ok;
            all_ok = all_ok && ok;
          }
          worst = std::max(worst, r.ratio);
          rows.push_back(row);
        };
        if (samples == 0) {
          record(*B, std::nullopt);
        } else {
          if (sample_size < 1 || sample_size > B->size()) throw UsageError("--size must lie in [1, |B|]");
          for (u64 i = 0; i < samples; ++i) {
            std::vector<u64> v;
            for (std::size_t idx : CounterRng(seed, i).subset(B->size(), sample_size)) v.push_back(B->elements()[idx]);
            record(ResidueSet(p, v), i);
          }
        }
        Json result{{"p", p.value()}, {"size_B", B->size()}, {"max_ratio", worst}, {"rows", rows}};
        if (c5) {
          result["c5"] = *c5;
          result["gamma"] = *gamma;
          result["all_within_bound"] = all_ok;
        }
        emit(result, "addcomb ess", *ess_cmd, [&] {
          out << "sample      |S|   E(S,S)/|S|^3\n";
          for (const auto& row : rows) {
            out << std::setw(6) << (row.contains("sample") ? std::to_string(row["sample"].get<u64>()) : "B") << "  "
                << std::setw(6) << row["size"].get<std::size_t>() << "   " << fmt(row["ratio"].get<double>()) << "\n";
          }
          out << "max ratio " << fmt(worst) << "\n";
        });
        return kOk;
      }
      if (*bsg_cmd) {
        const auto A = set_of(set_a);
        const auto res = bsg_witness_search(A, c1, c4, budget, bsg_mode == "exhaustive" ? BsgMode::Exhaustive : BsgMode::Random, seed);
        Json result{{"p", p.value()},          {"size_A", A.size()},
                    {"K", res.K},              {"size_floor", res.size_floor},
                    {"pairs_examined", res.pairs_examined}, {"budget_exhausted", res.budget_exhausted}};
        if (res.witness) {
          result["witness"] = Json{{"first", to_json(res.witness->first)},
                                   {"second", to_json(res.witness->second)},
                                   {"difference_size", res.witness->difference_size},
                                   {"difference_cap", res.witness->difference_cap},
                                   {"score", res.witness->score}};
        } else {
          result["witness"] = nullptr;
        }
        emit(result, "addcomb bsg", *bsg_cmd, [&] {
          out << "K = " << fmt(res.K) << ", size floor = " << fmt(res.size_floor) << ", pairs examined = "
              << res.pairs_examined << "\n";
          if (res.witness) {
            out << "witness |A'| = " << res.witness->first.size() << ", |B'| = " << res.witness->second.size()
                << ", |A'-B'| = " << res.witness->difference_size << " <= " << fmt(res.witness->difference_cap) << "\n";
          } else {
            out << "no witness found within budget\n";
          }
        });
        return kOk;
      }
    }

    if (*replay) {
      std::ifstream in(manifest_path);
      if (!in) throw Error(ErrorCode::Io, "cannot open " + manifest_path);
      const Json manifest = Json::parse(in);
      std::vector<std::string> replay_args;
      std::stringstream command(manifest.at("command").get<std::string>());
      for (std::string word; command >> word;) replay_args.push_back(word);
      if (replay_args.empty() || replay_args.front() == "replay") throw UsageError("manifest has no replayable command");
      for (const auto& [name, value] : manifest.at("inputs").items()) {
        const auto v = value.get<std::string>();
        if (v == "true" || v == "false") {
          if (v == "true") replay_args.push_back(name);
          continue;
        }
        replay_args.push_back(name);
        replay_args.push_back(v);
      }
      replay_args.push_back("--out");
      replay_args.push_back(replay_out.empty() ? manifest.at("outputs").at(0).get<std::string>() : replay_out);
      return run(replay_args, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace ripchirp::cli
