// poolbp: build two-type pooling designs, check their combinatorial
// properties, decode single replications and run Monte Carlo sweeps.
//
// Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "poolbp/config.hpp"
#include "poolbp/errors.hpp"
#include "poolbp/harness.hpp"
#include "poolbp/matrix_io.hpp"
#include "poolbp/pooling.hpp"
#include "poolbp/report.hpp"

namespace {

using namespace poolbp;

constexpr int kExitValidation = 1;
constexpr int kExitBudget = 2;
constexpr int kExitIo = 3;

// String-valued flags that double as config keys. Only flags actually given
// on the command line override the config file.
class Flags {
 public:
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    opts_[key] = app->add_option("--" + key, values_[key], help);
  }
  void add_switch(CLI::App* app, const std::string& key, const std::string& help) {
    switches_[key] = app->add_flag("--" + key, help);
  }
  ConfigMap given() const {
    ConfigMap out;
    for (const auto& [k, opt] : opts_) {
      if (opt->count() > 0) out[k] = values_.at(k);
    }
    for (const auto& [k, opt] : switches_) {
      if (opt->count() > 0) out[k] = "true";
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> opts_;
  std::map<std::string, CLI::Option*> switches_;
};

void add_model_flags(CLI::App* app, Flags& flags) {
  flags.add(app, "seed", "Base random seed");
  flags.add(app, "count-a", "Planted type-A defectives");
  flags.add(app, "count-b", "Planted type-B defectives");
  flags.add_switch(app, "bernoulli", "Plant Bernoulli(prior) defectives instead of fixed counts");
  flags.add(app, "sensitivity", "p(1|1) of every test");
  flags.add(app, "specificity", "p(0|0) of every test");
  flags.add(app, "prior-a", "Decoder prior p_A");
  flags.add(app, "prior-b", "Decoder prior p_B");
  flags.add(app, "eps", "BP convergence threshold");
  flags.add(app, "max-iter", "BP iteration cap");
  flags.add(app, "threads", "Worker threads (0 = all cores)");
  flags.add(app, "format", "table, csv or json");
  flags.add(app, "out", "Output path");
}

ConfigMap settings_for(const std::string& config_path, const Flags& flags) {
  ConfigMap base = config_path.empty() ? ConfigMap{} : load_config(config_path);
  return merge_config(std::move(base), flags.given());
}

bool looks_like_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::string token;
  in >> token;
  return token == "#A";
}

int cmd_design(const std::string& config_path, const Flags& flags) {
  ConfigMap s = settings_for(config_path, flags);
  ExperimentConfig defaults;
  std::uint32_t q = defaults.q;
  if (s.contains("q")) q = parse_index_list(s.at("q")).at(0);
  PoolingDesign design;
  if (s.contains("k")) {
    design = build_split_design(q, parse_index_list(s.at("k")).at(0));
  } else {
    auto list = [&](const char* key, const PlaneSet& fallback) {
      return s.contains(key) ? parse_index_list(s.at(key)) : fallback;
    };
    design = build_design(q, list("ka", defaults.k_a), list("kb", defaults.k_b), list("kab", defaults.k_ab));
  }
  if (s.contains("out")) {
    export_design(s.at("out"), design);
    std::cerr << "wrote design: " << design.n_items() << " items, pools A " << design.m_a.n_rows()
              << ", B " << design.m_b.n_rows() << ", AB " << design.m_ab.n_rows() << '\n';
  } else {
    write_design(std::cout, design);
  }
  return 0;
}

struct VerifyOptions {
  std::string path;
  std::uint32_t disjunct = 0;
  std::uint32_t separable = 0;
  std::uint32_t two_type = 0;
  bool collinearity = false;
  std::uint64_t budget = WorkBudget{}.max_work;
};

int cmd_verify(const VerifyOptions& o) {
  const WorkBudget budget{o.budget};
  bool over_budget = false;
  auto guarded = [&](const std::string& label, auto&& check) {
    std::cout << label << ": ";
    try {
      std::cout << (check() ? "yes" : "no") << '\n';
    } catch (const BudgetExceeded& e) {
      over_budget = true;
      std::cout << "not checked (" << e.what() << ")\n";
    }
  };
  auto collinear = [&](const std::string& label, const IncidenceMatrix& m) {
    const auto report = unique_collinearity_check(m);
    std::cout << "unique collinearity " << label << ": ";
    if (report.holds) {
      std::cout << "holds\n";
    } else {
      std::cout << "violated by rows " << report.violation->first << " and " << report.violation->second
                << '\n';
    }
  };

  if (!looks_like_design(o.path)) {
    const IncidenceMatrix m = import_matrix(o.path);
    std::cout << "matrix " << m.n_rows() << " x " << m.n_cols() << '\n';
    if (o.collinearity) collinear("M", m);
    if (o.disjunct > 0) {
      guarded("disjunct(" + std::to_string(o.disjunct) + ") M", [&] { return is_disjunct(m, o.disjunct, budget); });
    }
    if (o.separable > 0) {
      guarded("separable(" + std::to_string(o.separable) + ") M",
              [&] { return is_separable_bar(m, o.separable, budget); });
    }
    return over_budget ? kExitBudget : 0;
  }

  const PoolingDesign design = import_design(o.path);
  design.validate();
  std::cout << "items " << design.n_items() << "; pools A " << design.m_a.n_rows() << ", B "
            << design.m_b.n_rows() << ", AB " << design.m_ab.n_rows() << '\n';
  std::cout << "plane provenance: unavailable for imported designs; plane-overlap checks skipped\n";
  if (o.collinearity) {
    collinear("M_A", design.m_a);
    collinear("M_B", design.m_b);
    collinear("M_AB", design.m_ab);
  }
  if (o.disjunct > 0) {
    const std::string d = std::to_string(o.disjunct);
    guarded("disjunct(" + d + ") M_A", [&] { return is_disjunct(design.m_a, o.disjunct, budget); });
    guarded("disjunct(" + d + ") M_B", [&] { return is_disjunct(design.m_b, o.disjunct, budget); });
  }
  if (o.separable > 0) {
    const std::string d = std::to_string(o.separable);
    guarded("separable(" + d + ") [M_A;M_AB]",
            [&] { return is_separable_bar(design.stacked_a(), o.separable, budget); });
    guarded("separable(" + d + ") [M_B;M_AB]",
            [&] { return is_separable_bar(design.stacked_b(), o.separable, budget); });
  }
  if (o.two_type > 0) {
    guarded("(2," + std::to_string(o.two_type) + ")-separable",
            [&] { return is_2d_separable(design, o.two_type, budget); });
  }
  return over_budget ? kExitBudget : 0;
}

int cmd_simulate(const std::string& design_path, const std::string& config_path, const std::string& rep_text,
                 const Flags& flags) {
  ConfigMap s = settings_for(config_path, flags);
  const std::string format = s.contains("format") ? s.at("format") : "csv";
  const std::optional<std::string> out_path =
      s.contains("out") ? std::optional<std::string>(s.at("out")) : std::nullopt;
  s.erase("format");
  s.erase("out");
  s["design"] = design_path;
  ExperimentPlan plan = plan_from_config(s);
  const ExperimentConfig& cfg = plan.config;
  const std::size_t rep = parse_index_list(rep_text).at(0);

  const PoolingDesign design = cfg.make_design();
  Rng rng = Rng::for_replication(cfg.seed, rep);
  const GroundTruth truth = cfg.bernoulli ? plant_bernoulli(design.n_items(), cfg.priors, rng)
                                          : plant_fixed(design.n_items(), cfg.count_a, cfg.count_b, rng);
  const Observations obs = observe(design, truth, cfg.noise, rng);
  const BpResult bp = run_bp(design, obs, cfg.priors, cfg.noise, cfg.bp);

  std::ostringstream text;
  if (format == "json") {
    nlohmann::json j{{"converged", bp.converged},
                     {"iterations", bp.iterations},
                     {"worst_rank_A", worst_rank(rank_items(bp.marginals, DefectType::A), truth, DefectType::A)},
                     {"worst_rank_B", worst_rank(rank_items(bp.marginals, DefectType::B), truth, DefectType::B)},
                     {"marginals", marginals_to_json(bp.marginals, &truth)}};
    text << j.dump(2) << '\n';
  } else if (format == "csv") {
    write_marginals_csv(text, bp.marginals, &truth);
  } else {
    throw ValidationError("simulate writes csv or json, not '" + format + "'");
  }
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) throw IoError("cannot open " + *out_path + " for writing");
    out << text.str();
    if (!out) throw IoError("failed writing " + *out_path);
  } else {
    std::cout << text.str();
  }
  std::cerr << (bp.converged ? "converged" : "did not converge") << " after " << bp.iterations
            << " iterations\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, const Flags& flags) {
  const ExperimentPlan plan = plan_from_config(settings_for(config_path, flags));
  if (plan.is_grid()) {
    const auto cells = run_grid(plan.config, plan.grid_k, plan.grid_counts);
    if (plan.out) emit_grid(cells, plan.format, *plan.out);
    write_grid_table(std::cout, cells);
    std::size_t failures = 0;
    for (const auto& c : cells) failures += c.result.summary.failures;
    if (failures > 0) std::cerr << failures << " replications failed to decode\n";
    return 0;
  }
  const ExperimentResult result = run_experiment(plan.config);
  if (plan.out) emit_results(result, plan.format, *plan.out);
  write_summary_table(std::cout, result.summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-type group testing: pooling designs, BP decoding, screening experiments"};
  app.require_subcommand(1);

  std::string config_path;

  auto* design = app.add_subcommand("design", "Emit an AG(3,q) plane-stacked design file");
  Flags design_flags;
  design->add_option("--config", config_path, "key=value settings file");
  design_flags.add(design, "q", "Prime field size");
  design_flags.add(design, "ka", "Planes for type-A pools, e.g. 0,1,2");
  design_flags.add(design, "kb", "Planes for type-B pools");
  design_flags.add(design, "kab", "Planes for AB pools");
  design_flags.add(design, "k", "Split design: K_A = K_B = {0..k-1}, K_AB = {k..q-1}");
  design_flags.add(design, "out", "Design file to write (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "Check combinatorial properties of a design or matrix file");
  VerifyOptions vopt;
  verify->add_option("file", vopt.path, "Design or matrix file")->required();
  verify->add_option("--disjunct", vopt.disjunct, "Check d-disjunctness of M_A and M_B");
  verify->add_option("--separable", vopt.separable, "Check d-bar-separability of [M_A;M_AB], [M_B;M_AB]");
  verify->add_option("--two-type", vopt.two_type, "Check (2,d-bar)-separability");
  verify->add_flag("--collinearity", vopt.collinearity, "Check the unique collinearity condition");
  verify->add_option("--budget", vopt.budget, "Work budget for exact checks");

  auto* simulate = app.add_subcommand("simulate", "Decode one replication and dump the marginals");
  std::string sim_design;
  std::string rep_text = "0";
  Flags sim_flags;
  simulate->add_option("design", sim_design, "Design file")->required();
  simulate->add_option("--config", config_path, "key=value settings file");
  simulate->add_option("--rep", rep_text, "Replication index (selects the random stream)");
  add_model_flags(simulate, sim_flags);

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo worst-rank experiment");
  Flags exp_flags;
  experiment->add_option("--config", config_path, "key=value settings file");
  exp_flags.add(experiment, "q", "Prime field size");
  exp_flags.add(experiment, "ka", "Planes for type-A pools");
  exp_flags.add(experiment, "kb", "Planes for type-B pools");
  exp_flags.add(experiment, "kab", "Planes for AB pools");
  exp_flags.add(experiment, "design", "Design file instead of plane sets");
  exp_flags.add(experiment, "k", "Sweep split designs over these k");
  exp_flags.add(experiment, "counts", "Sweep these per-type defective counts");
  exp_flags.add(experiment, "reps", "Replications per cell");
  add_model_flags(experiment, exp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*design) return cmd_design(config_path, design_flags);
    if (*verify) return cmd_verify(vopt);
    if (*simulate) return cmd_simulate(sim_design, config_path, rep_text, sim_flags);
    if (*experiment) return cmd_experiment(config_path, exp_flags);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
