#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "boltzmap/dataset.hpp"
#include "boltzmap/errors.hpp"
#include "boltzmap/evaluation.hpp"
#include "boltzmap/exact.hpp"
#include "boltzmap/mapping.hpp"
#include "boltzmap/rbm_model.hpp"
#include "boltzmap/sampling.hpp"
#include "boltzmap/training.hpp"

namespace boltzmap::cli {

namespace {

constexpr const char* kVersion = "boltzmap 0.1.0";

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Provenance record written next to every produced file. The digest covers
/// the deterministic fields only (not timestamps), so reruns with identical
/// inputs produce byte-identical CSV outputs carrying the same digest.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)), started_(iso_now()) {}

  void add_input(const std::string& path) { inputs_[path] = file_digest(path); }
  void set_config(nlohmann::json config) { config_ = std::move(config); }

  std::string digest() const {
    nlohmann::json stable;
    stable["command"] = command_;
    stable["argv"] = argv_;
    stable["version"] = kVersion;
    stable["inputs"] = inputs_;
    stable["config"] = config_;
    const std::string dump = stable.dump();
    return fnv1a_hex(dump.data(), dump.size());
  }

  void write(const std::filesystem::path& out_file) const {
    nlohmann::json doc;
    doc["command"] = command_;
    doc["argv"] = argv_;
    doc["version"] = kVersion;
    doc["inputs"] = inputs_;
    doc["config"] = config_;
    doc["digest"] = digest();
    doc["started"] = started_;
    doc["finished"] = iso_now();
    auto dir = out_file.parent_path();
    if (dir.empty()) dir = ".";
    std::ofstream out(dir / "manifest.json");
    if (!out) throw DataError("cannot write manifest in " + dir.string());
    out << doc.dump(2) << '\n';
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::map<std::string, std::string> inputs_;
  nlohmann::json config_;
  std::string started_;
};

std::ofstream open_csv(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "# manifest-digest: " << manifest.digest() << '\n';
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("BOLTZMAP_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// IDX files are detected by their magic number; anything else parses as a
/// 0/1 CSV.
BinaryDataset load_dataset(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw DataError("cannot open: " + path);
  unsigned char head[4] = {0, 0, 0, 0};
  probe.read(reinterpret_cast<char*>(head), 4);
  probe.close();
  const std::uint32_t magic = (std::uint32_t(head[0]) << 24) |
                              (std::uint32_t(head[1]) << 16) |
                              (std::uint32_t(head[2]) << 8) | std::uint32_t(head[3]);
  if (magic == 0x00000803) return binarize(load_idx(path));
  return load_binary_csv(path);
}

std::vector<int> load_index_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<int> pool;
  std::string tok;
  while (in >> tok) {
    // allow comma-separated as well as whitespace-separated indices
    std::istringstream ss(tok);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (!piece.empty()) pool.push_back(std::stoi(piece));
    }
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

/// Couplings CSV (interaction format, order-2 rows) to a dense symmetric
/// matrix with zero diagonal.
Eigen::MatrixXd couplings_matrix(const InteractionModel& model, int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [subset, value] : model.terms) {
    if (subset.size() != 2) {
      throw DataError("couplings file must contain only order-2 rows");
    }
    j(subset[0], subset[1]) = value;
    j(subset[1], subset[0]) = value;
  }
  return j;
}

int run_train(CLI::App& app, const std::vector<std::string>& argv);
int run_map(CLI::App& app, const std::vector<std::string>& argv);
int run_embed(CLI::App& app, const std::vector<std::string>& argv);
int run_sample(CLI::App& app, const std::vector<std::string>& argv);
int run_validate(CLI::App& app, const std::vector<std::string>& argv);
int run_eval(CLI::App& app, const std::vector<std::string>& argv);
int run_stats(CLI::App& app, const std::vector<std::string>& argv);
int run_cumulants(CLI::App& app, const std::vector<std::string>& argv);

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<std::string> argv_storage = args;
  std::vector<char*> argv;
  argv.reserve(argv_storage.size());
  for (auto& s : argv_storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
  CLI::App app{"Generalized RBMs and their interaction-model mappings"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const std::vector<std::string> raw(argv, argv + argc);

  // ---- train ----------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Train an RBM with CD-k");
  struct {
    std::string data, eval_data, activation = "step", out, log;
    int hidden = 0;
    TrainConfig config;
  } train_args;
  train_cmd->add_option("--data", train_args.data, "training data (IDX or 0/1 CSV)")
      ->required();
  train_cmd->add_option("--eval-data", train_args.eval_data,
                        "pseudo-likelihood probe data (default: --data)");
  train_cmd->add_option("--activation", train_args.activation,
                        "linear|relu|step|exp")
      ->required();
  train_cmd->add_option("--hidden", train_args.hidden, "hidden units")->required();
  train_cmd->add_option("--epochs", train_args.config.epochs, "epochs (default 500)");
  train_cmd->add_option("--minibatch", train_args.config.minibatch,
                        "minibatch size (default 100)");
  train_cmd->add_option("--eta0", train_args.config.eta0,
                        "initial learning rate (default: per activation)");
  train_cmd->add_option("--eval-subset", train_args.config.eval_subset,
                        "pseudo-likelihood probe size (default 100)");
  train_cmd->add_option("--seed", train_args.config.seed, "master seed");
  train_cmd->add_option("--out", train_args.out, "output model file")->required();
  train_cmd->add_option("--log", train_args.log, "training log CSV");
  train_cmd->set_config("--config", "", "key=value config file");

  // ---- map -------------------------------------------------------------
  auto* map_cmd = app.add_subcommand("map", "Expand an RBM into interaction terms");
  struct {
    std::string model, indices, out;
    int max_order = 2;
    double budget = 1e9;
    bool force = false;
    int threads = default_threads();
  } map_args;
  map_cmd->add_option("--model", map_args.model, "RBM model file")->required();
  map_cmd->add_option("--max-order", map_args.max_order, "largest order (default 2)");
  map_cmd->add_option("--indices", map_args.indices,
                      "file restricting the visible index pool");
  map_cmd->add_option("--budget", map_args.budget,
                      "K-evaluation budget (default 1e9)");
  map_cmd->add_flag("--force", map_args.force, "ignore the budget guard");
  map_cmd->add_option("--threads", map_args.threads, "worker threads");
  map_cmd->add_option("--out", map_args.out, "output CSV")->required();

  // ---- embed -----------------------------------------------------------
  auto* embed_cmd =
      app.add_subcommand("embed", "Embed a pairwise model into a Linear RBM");
  struct {
    std::string couplings, fields, out;
    int rank = 0;  // 0 -> N-1
    int n = 0;
  } embed_args;
  embed_cmd->add_option("--couplings", embed_args.couplings,
                        "order-2 interaction CSV")
      ->required();
  embed_cmd->add_option("--fields", embed_args.fields, "order-1 interaction CSV");
  embed_cmd->add_option("--rank", embed_args.rank, "hidden units (default N-1)");
  embed_cmd->add_option("--n", embed_args.n, "number of visibles (default inferred)");
  embed_cmd->add_option("--out", embed_args.out, "output model file")->required();

  // ---- sample ----------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "Draw Gibbs samples from an RBM");
  struct {
    std::string model, out;
    long n_samples = 1000;
    int trials = 1;
    long burn_in = 1000;
    long thin = 1;
    std::uint64_t seed = 0;
    int threads = default_threads();
  } sample_args;
  sample_cmd->add_option("--model", sample_args.model, "RBM model file")->required();
  sample_cmd->add_option("--n-samples", sample_args.n_samples,
                         "samples per trial (default 1000)");
  sample_cmd->add_option("--trials", sample_args.trials,
                         "independent chains (default 1)");
  sample_cmd->add_option("--burn-in", sample_args.burn_in,
                         "burn-in sweeps (default 1000)");
  sample_cmd->add_option("--thin", sample_args.thin, "sweeps per sample (default 1)");
  sample_cmd->add_option("--seed", sample_args.seed, "master seed");
  sample_cmd->add_option("--threads", sample_args.threads, "worker threads");
  sample_cmd->add_option("--out", sample_args.out, "output CSV of 0/1 rows")
      ->required();

  // ---- validate --------------------------------------------------------
  auto* validate_cmd = app.add_subcommand(
      "validate", "Compare Gibbs frequencies against exact probabilities");
  struct {
    std::string model, out, exact_out;
    long samples = 1000;
    int trials = 20;
    long burn_in = 1000;
    long thin = 1;
    std::uint64_t seed = 0;
    double budget = 1e9;
    int threads = default_threads();
  } validate_args;
  validate_cmd->add_option("--model", validate_args.model, "RBM model file")
      ->required();
  validate_cmd->add_option("--samples", validate_args.samples,
                           "samples per trial (default 1000)");
  validate_cmd->add_option("--trials", validate_args.trials,
                           "independent chains (default 20)");
  validate_cmd->add_option("--burn-in", validate_args.burn_in,
                           "burn-in sweeps (default 1000)");
  validate_cmd->add_option("--thin", validate_args.thin,
                           "sweeps per sample (default 1)");
  validate_cmd->add_option("--seed", validate_args.seed, "master seed");
  validate_cmd->add_option("--budget", validate_args.budget,
                           "K-evaluation budget for the interaction route");
  validate_cmd->add_option("--threads", validate_args.threads, "worker threads");
  validate_cmd->add_option("--out", validate_args.out,
                           "report CSV (default: stdout)");
  validate_cmd->add_option("--exact-out", validate_args.exact_out,
                           "exact table CSV (mask,log_weight,probability)");

  // ---- eval ------------------------------------------------------------
  auto* eval_cmd =
      app.add_subcommand("eval", "Pseudo-likelihood and AIS log-partition");
  struct {
    std::string model, data, out;
    bool pl = false, ais = false, base_from_data = false;
    int runs = 100, temps = 14000;
    std::uint64_t seed = 0;
    int threads = default_threads();
  } eval_args;
  eval_cmd->add_option("--model", eval_args.model, "RBM model file")->required();
  eval_cmd->add_option("--data", eval_args.data, "data (IDX or 0/1 CSV)");
  eval_cmd->add_flag("--pl", eval_args.pl, "report mean pseudo-likelihood");
  eval_cmd->add_flag("--ais", eval_args.ais, "estimate log Z' with AIS");
  eval_cmd->add_flag("--base-from-data", eval_args.base_from_data,
                     "AIS base biases from data log-odds (default: zeros)");
  eval_cmd->add_option("--runs", eval_args.runs, "AIS runs (default 100)");
  eval_cmd->add_option("--temps", eval_args.temps,
                       "AIS temperatures (default 14000)");
  eval_cmd->add_option("--seed", eval_args.seed, "master seed");
  eval_cmd->add_option("--threads", eval_args.threads, "worker threads");
  eval_cmd->add_option("--out", eval_args.out, "output CSV (default: stdout)");

  // ---- stats -----------------------------------------------------------
  auto* stats_cmd =
      app.add_subcommand("stats", "Compare two interaction CSVs at one order");
  struct {
    std::string a, b, out;
    int order = 2;
  } stats_args;
  stats_cmd->add_option("--a", stats_args.a, "interaction CSV")->required();
  stats_cmd->add_option("--b", stats_args.b, "reference interaction CSV")->required();
  stats_cmd->add_option("--order", stats_args.order, "interaction order (default 2)");
  stats_cmd->add_option("--out", stats_args.out, "output CSV (default: stdout)");

  // ---- cumulants -------------------------------------------------------
  auto* cum_cmd =
      app.add_subcommand("cumulants", "Cumulants of a hidden-unit potential");
  struct {
    std::string activation = "step", out;
    double bias = 0.0;
    int max_order = 4;
  } cum_args;
  cum_cmd->add_option("--activation", cum_args.activation, "linear|relu|step|exp")
      ->required();
  cum_cmd->add_option("--bias", cum_args.bias, "hidden bias c (default 0)");
  cum_cmd->add_option("--max-order", cum_args.max_order, "largest order (default 4)");
  cum_cmd->add_option("--out", cum_args.out, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd) {
      Manifest manifest("train", raw);
      manifest.add_input(train_args.data);
      if (!train_args.eval_data.empty()) manifest.add_input(train_args.eval_data);
      const ActivationKind kind = activation_from_string(train_args.activation);
      manifest.set_config({{"activation", train_args.activation},
                           {"hidden", train_args.hidden},
                           {"epochs", train_args.config.epochs},
                           {"minibatch", train_args.config.minibatch},
                           {"eta0", train_args.config.eta0},
                           {"eval_subset", train_args.config.eval_subset},
                           {"seed", train_args.config.seed}});
      const BinaryDataset data = load_dataset(train_args.data);
      const BinaryDataset eval_data = train_args.eval_data.empty()
                                          ? data
                                          : load_dataset(train_args.eval_data);
      const TrainResult result =
          train(data, eval_data, train_args.config, kind, train_args.hidden);
      save_rbm(result.model, train_args.out);
      if (!train_args.log.empty()) {
        save_train_log(result.log, train_args.log,
                       "manifest-digest: " + manifest.digest());
      }
      manifest.write(train_args.out);
      return 0;
    }

    if (*map_cmd) {
      Manifest manifest("map", raw);
      manifest.add_input(map_args.model);
      ExpandOptions options;
      options.max_order = map_args.max_order;
      options.budget = map_args.budget;
      options.force = map_args.force;
      options.n_threads = map_args.threads;
      if (!map_args.indices.empty()) {
        manifest.add_input(map_args.indices);
        options.pool = load_index_pool(map_args.indices);
      }
      manifest.set_config({{"max_order", options.max_order},
                           {"budget", options.budget},
                           {"force", options.force}});
      const RbmModel model = load_rbm(map_args.model);
      const InteractionModel terms = expand(model, options);
      {
        auto out = open_csv(map_args.out, manifest);
        out << "order,indices,value\n";
        for (const auto& [subset, value] : terms.terms) {
          out << subset.size() << ',';
          for (std::size_t i = 0; i < subset.size(); ++i) {
            if (i) out << ';';
            out << subset[i];
          }
          out << ',' << format_g17(value) << '\n';
        }
      }
      manifest.write(map_args.out);
      return 0;
    }

    if (*embed_cmd) {
      Manifest manifest("embed", raw);
      manifest.add_input(embed_args.couplings);
      const InteractionModel couplings =
          load_interactions(embed_args.couplings, embed_args.n);
      int n = couplings.n_visible;
      Eigen::VectorXd fields = Eigen::VectorXd::Zero(n);
      if (!embed_args.fields.empty()) {
        manifest.add_input(embed_args.fields);
        const InteractionModel field_terms = load_interactions(embed_args.fields, n);
        if (field_terms.n_visible > n) {
          n = field_terms.n_visible;
          fields = Eigen::VectorXd::Zero(n);
        }
        for (const auto& [subset, value] : field_terms.terms) {
          if (subset.size() != 1) {
            throw DataError("fields file must contain only order-1 rows");
          }
          fields(subset[0]) = value;
        }
      }
      manifest.set_config({{"rank", embed_args.rank}, {"n", n}});
      const Eigen::MatrixXd j = couplings_matrix(couplings, n);
      const RbmModel model =
          linear_embed(j, fields, embed_args.rank > 0 ? embed_args.rank : -1);
      save_rbm(model, embed_args.out);
      manifest.write(embed_args.out);
      return 0;
    }

    if (*sample_cmd) {
      Manifest manifest("sample", raw);
      manifest.add_input(sample_args.model);
      manifest.set_config({{"n_samples", sample_args.n_samples},
                           {"trials", sample_args.trials},
                           {"burn_in", sample_args.burn_in},
                           {"thin", sample_args.thin},
                           {"seed", sample_args.seed}});
      const RbmModel model = load_rbm(sample_args.model);
      // trials own independent streams; emitted in trial order for any T
      std::vector<Eigen::MatrixXd> blocks(
          static_cast<std::size_t>(sample_args.trials));
      const int workers_wanted =
          std::max(1, std::min(sample_args.threads, sample_args.trials));
      std::vector<std::thread> workers;
      const int chunk =
          (sample_args.trials + workers_wanted - 1) / workers_wanted;
      for (int w = 0; w < workers_wanted; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(sample_args.trials, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&, lo, hi] {
          for (int t = lo; t < hi; ++t) {
            blocks[static_cast<std::size_t>(t)] =
                sample_rows(model, sample_args.n_samples, sample_args.burn_in,
                            sample_args.thin, sample_args.seed,
                            static_cast<std::uint64_t>(t));
          }
        });
      }
      for (auto& w : workers) w.join();
      {
        auto out = open_csv(sample_args.out, manifest);
        out << "# trials: " << sample_args.trials
            << " samples-per-trial: " << sample_args.n_samples << '\n';
        for (const auto& rows : blocks) {
          for (Eigen::Index r = 0; r < rows.rows(); ++r) {
            for (Eigen::Index j = 0; j < rows.cols(); ++j) {
              if (j) out << ',';
              out << static_cast<int>(rows(r, j));
            }
            out << '\n';
          }
        }
      }
      manifest.write(sample_args.out);
      return 0;
    }

    if (*validate_cmd) {
      Manifest manifest("validate", raw);
      manifest.add_input(validate_args.model);
      manifest.set_config({{"samples", validate_args.samples},
                           {"trials", validate_args.trials},
                           {"burn_in", validate_args.burn_in},
                           {"thin", validate_args.thin},
                           {"seed", validate_args.seed}});
      const RbmModel model = load_rbm(validate_args.model);
      const int n = static_cast<int>(model.n_visible());

      // exact probabilities via the interaction model when the expansion
      // fits the budget (the Fig. 2 route); direct enumeration otherwise
      const double cost = expand_cost(n, n, static_cast<int>(model.n_hidden()));
      std::string route;
      ExactSummary exact;
      if (cost <= validate_args.budget) {
        ExpandOptions options;
        options.max_order = n;
        options.budget = validate_args.budget;
        options.n_threads = validate_args.threads;
        exact = enumerate_states(expand(model, options));
        route = "interaction-model";
      } else {
        exact = enumerate_states(model);
        route = "direct-enumeration";
      }

      const auto trials =
          sample_state_masks(model, validate_args.trials, validate_args.samples,
                             validate_args.burn_in, validate_args.thin,
                             validate_args.seed, validate_args.threads);
      std::vector<std::uint32_t> pooled;
      for (const auto& t : trials) pooled.insert(pooled.end(), t.begin(), t.end());
      const FrequencyReport report =
          compare_frequencies(exact, pooled, validate_args.trials);

      auto write_report = [&](std::ostream& out) {
        out << "# route: " << route << '\n';
        out << "# tv_distance: " << format_g17(report.tv_distance) << '\n';
        out << "# chi_square: " << format_g17(report.chi_square)
            << " dof: " << report.dof
            << " p_value: " << format_g17(report.p_value) << '\n';
        out << "mask,exact_prob,mean_freq,freq_sd\n";
        for (Eigen::Index s = 0; s < report.exact_prob.size(); ++s) {
          out << s << ',' << format_g17(report.exact_prob(s)) << ','
              << format_g17(report.mean_freq(s)) << ','
              << format_g17(report.freq_sd(s)) << '\n';
        }
      };
      if (validate_args.out.empty()) {
        write_report(std::cout);
      } else {
        auto out = open_csv(validate_args.out, manifest);
        write_report(out);
      }
      if (!validate_args.exact_out.empty()) {
        auto out = open_csv(validate_args.exact_out, manifest);
        out << "mask,log_weight,probability\n";
        for (Eigen::Index s = 0; s < exact.log_weights.size(); ++s) {
          out << s << ',' << format_g17(exact.log_weights(s)) << ','
              << format_g17(exact.probabilities(s)) << '\n';
        }
      }
      if (!validate_args.out.empty()) manifest.write(validate_args.out);
      return 0;
    }

    if (*eval_cmd) {
      if (!eval_args.pl && !eval_args.ais) {
        std::cerr << "eval: nothing to do (pass --pl and/or --ais)\n";
        return 1;
      }
      Manifest manifest("eval", raw);
      manifest.add_input(eval_args.model);
      if (!eval_args.data.empty()) manifest.add_input(eval_args.data);
      manifest.set_config({{"pl", eval_args.pl},
                           {"ais", eval_args.ais},
                           {"runs", eval_args.runs},
                           {"temps", eval_args.temps},
                           {"base_from_data", eval_args.base_from_data},
                           {"seed", eval_args.seed}});
      const RbmModel model = load_rbm(eval_args.model);

      std::vector<std::pair<std::string, std::string>> rows;
      if (eval_args.pl) {
        if (eval_args.data.empty()) throw DataError("--pl requires --data");
        const BinaryDataset data = load_dataset(eval_args.data);
        rows.emplace_back("pseudo_likelihood",
                          format_g17(pseudo_likelihood(model, data.all_rows())));
        rows.emplace_back("n_data", std::to_string(data.n_items()));
      }
      if (eval_args.ais) {
        AisConfig config;
        config.n_runs = eval_args.runs;
        config.n_temperatures = eval_args.temps;
        config.seed = eval_args.seed;
        config.n_threads = eval_args.threads;
        if (eval_args.base_from_data) {
          if (eval_args.data.empty()) {
            throw DataError("--base-from-data requires --data");
          }
          const BinaryDataset data = load_dataset(eval_args.data);
          Eigen::VectorXd mean = data.feature_means();
          config.base_biases.resize(mean.size());
          for (Eigen::Index i = 0; i < mean.size(); ++i) {
            const double m = std::clamp(mean(i), 1e-6, 1.0 - 1e-6);
            config.base_biases(i) = std::log(m) - std::log1p(-m);
          }
        }
        const AisEstimate estimate = ais_log_partition(model, config);
        rows.emplace_back("ais_log_z", format_g17(estimate.log_z));
        rows.emplace_back("ais_std_error", format_g17(estimate.std_error));
        rows.emplace_back("ais_lower", format_g17(estimate.lower));
        rows.emplace_back("ais_upper", format_g17(estimate.upper));
        rows.emplace_back("ais_outliers_removed",
                          std::to_string(estimate.n_outliers_removed));
      }
      auto write_rows = [&](std::ostream& out) {
        out << "metric,value\n";
        for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
      };
      if (eval_args.out.empty()) {
        write_rows(std::cout);
      } else {
        auto out = open_csv(eval_args.out, manifest);
        write_rows(out);
        manifest.write(eval_args.out);
      }
      return 0;
    }

    if (*stats_cmd) {
      Manifest manifest("stats", raw);
      manifest.add_input(stats_args.a);
      manifest.add_input(stats_args.b);
      manifest.set_config({{"order", stats_args.order}});
      const InteractionModel a = load_interactions(stats_args.a);
      InteractionModel b = load_interactions(stats_args.b);
      b.n_visible = std::max(b.n_visible, a.n_visible);
      InteractionModel a2 = a;
      a2.n_visible = b.n_visible;
      const OrderStats stats = comparison_stats(a2, b, stats_args.order);
      auto write_rows = [&](std::ostream& out) {
        out << "order,slope,nrmse,rms_a,rms_b,n_terms\n";
        out << stats_args.order << ',' << format_g17(stats.slope) << ','
            << format_g17(stats.nrmse) << ',' << format_g17(stats.rms_a) << ','
            << format_g17(stats.rms_b) << ',' << stats.n_terms << '\n';
      };
      if (stats_args.out.empty()) {
        write_rows(std::cout);
      } else {
        auto out = open_csv(stats_args.out, manifest);
        write_rows(out);
        manifest.write(stats_args.out);
      }
      return 0;
    }

    if (*cum_cmd) {
      Manifest manifest("cumulants", raw);
      manifest.set_config({{"activation", cum_args.activation},
                           {"bias", cum_args.bias},
                           {"max_order", cum_args.max_order}});
      const ActivationKind kind = activation_from_string(cum_args.activation);
      auto write_rows = [&](std::ostream& out) {
        out << "order,value\n";
        for (int n = 1; n <= cum_args.max_order; ++n) {
          out << n << ',' << format_g17(cumulant(kind, cum_args.bias, n)) << '\n';
        }
      };
      if (cum_args.out.empty()) {
        write_rows(std::cout);
      } else {
        auto out = open_csv(cum_args.out, manifest);
        write_rows(out);
        manifest.write(cum_args.out);
      }
      return 0;
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace boltzmap::cli
