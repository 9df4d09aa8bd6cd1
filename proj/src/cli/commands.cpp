#include "sgraphon/cli.hpp"

#include "sgraphon/errors.hpp"
#include "sgraphon/evaluation.hpp"
#include "sgraphon/graphon.hpp"
#include "sgraphon/grid_io.hpp"
#include "sgraphon/inference.hpp"
#include "sgraphon/models.hpp"
#include "sgraphon/relational_data.hpp"
#include "sgraphon/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace sgraphon::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kModelNames{"sbm", "isg", "lfsg", "mmsb"};

// Substream keys below the sweep range (sweeps start at 1): {0} and {0, 1} are
// taken by the sampler's initialisation, the rest by the commands.
constexpr std::uint64_t kSetupKey = 0;
constexpr std::uint64_t kSplitKey = 2;
constexpr std::uint64_t kGenerateKey = 3;
constexpr std::uint64_t kSubsampleKey = 4;

// ---------------------------------------------------------------------------
// File helpers

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

fs::path prepare_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

template <typename Write>
void write_file(const fs::path& path, Write&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write(out);
  out.flush();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void write_grid_files(const fs::path& dir, const Eigen::MatrixXd& grid) {
  write_file(dir / "graphon.csv", [&](std::ostream& o) { write_grid_csv(o, grid); });
  write_file(dir / "graphon.pgm", [&](std::ostream& o) { write_grid_pgm(o, grid); });
}

/// Ordered "key = value" echo of resolved settings.
class Echo {
 public:
  template <typename T>
  Echo& add(const std::string& key, const T& value) {
    std::ostringstream s;
    if constexpr (std::is_floating_point_v<T>) s << format_real(value);
    else if constexpr (std::is_same_v<T, bool>) s << (value ? "true" : "false");
    else s << value;
    lines_.emplace_back(key, s.str());
    return *this;
  }
  void write(std::ostream& out) const {
    for (const auto& [k, v] : lines_) out << k << " = " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

SelfLoops loops_flag(bool self_loops) { return self_loops ? SelfLoops::included : SelfLoops::excluded; }

bool is_dense_csv(const std::string& path) { return fs::path(path).extension() == ".csv"; }

/// Edge list (n given or inferred as max id + 1) or dense 0/1 CSV.
RelationalMatrix load_relation(const std::string& path, long n, SelfLoops loops) {
  auto in = open_input(path);
  if (is_dense_csv(path)) {
    RelationalMatrix R = load_dense_csv(in, loops);
    if (n > 0 && R.size() != n)
      throw DataError("dense matrix has " + std::to_string(R.size()) + " rows but --n is " + std::to_string(n));
    return R;
  }
  if (n > 0) return load_edge_list(in, n, loops);
  const auto edges = read_edges(in);
  std::size_t count = 0;
  for (const auto& [a, b] : edges) count = std::max({count, a + 1, b + 1});
  if (count == 0) throw DataError("edge list '" + path + "' is empty; pass --n to fit an empty relation");
  std::vector<std::size_t> nodes(count);
  std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  return induced_relation(edges, nodes, loops);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string model = "lfsg";
  long n = 0;
  long k = 4;
  std::uint64_t seed = 0;
  std::string out;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  std::optional<double> lambda;
  std::string state;
  long resolution = 200;
  bool self_loops = false;
};

void cmd_simulate(const SimulateOptions& o, std::ostream& log) {
  const fs::path dir = prepare_dir(o.out);
  Rng setup = Rng::substream(o.seed, {kSetupKey});
  Rng gen = Rng::substream(o.seed, {kGenerateKey});

  std::variant<LatentState, MmsbState> truth = [&]() -> std::variant<LatentState, MmsbState> {
    if (!o.state.empty()) {
      auto in = open_input(o.state);
      return read_state(in);
    }
    if (o.n < 1) throw UsageError("--n: must be at least 1 when no --state is given");
    if (o.k < 1) throw UsageError("--k: must be at least 1");
    const Hyperparameters h = Hyperparameters::symmetric(o.k, o.alpha0, o.beta0, 1.0);
    const ModelKind kind = parse_model_kind(o.model);
    if (kind == ModelKind::mmsb) return sample_mmsb_prior(h, o.n, setup);
    LatentState s = sample_prior(h, o.n, kind, setup);
    if (o.lambda) s.lambda = SmoothingParameter<double>(*o.lambda);
    return s;
  }();

  RelationalMatrix R = std::visit(
      [&](auto& state) -> RelationalMatrix {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, MmsbState>) {
          return generate_mmsb(state, gen);
        } else {
          switch (state.kind) {
            case ModelKind::sbm: return generate_sbm(state, gen);
            case ModelKind::isg: return generate_isg(state, gen);
            case ModelKind::lfsg: return generate_lfsg(state, gen);
            case ModelKind::mmsb: break;
          }
          throw UsageError("state snapshot has an unsupported kind");
        }
      },
      truth);
  if (!o.self_loops)
    for (Eigen::Index i = 0; i < R.size(); ++i) R.set(i, i, false);

  write_file(dir / "edges.tsv", [&](std::ostream& out) { write_edge_list(out, R); });
  std::visit([&](const auto& state) { write_file(dir / "state.txt", [&](std::ostream& out) { write_state(out, state); }); },
             truth);
  if (const auto* latent = std::get_if<LatentState>(&truth)) {
    const GridMode mode = latent->kind == ModelKind::sbm ? GridMode::piecewise : GridMode::smooth;
    write_grid_files(dir, intensity_grid(latent->partition, latent->B, latent->lambda, o.resolution, mode));
  } else {
    // No graphon for the mixed-membership baseline: export the node-pair intensities instead.
    const auto& mmsb = std::get<MmsbState>(truth);
    write_file(dir / "intensity.csv", [&](std::ostream& out) { write_grid_csv(out, intensity_matrix(mmsb)); });
  }
  const DatasetSummary summary = summarize(R);
  log << "simulated " << R.size() << " nodes, " << summary.positive_links << " links -> " << dir.string() << '\n';
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
  std::string model = "lfsg";
  std::string data;
  std::string mask;
  long n = 0;
  long k = 4;
  std::size_t iters = 2000;
  std::size_t burnin = 1000;
  std::size_t thin = 5;
  double train_ratio = 0.9;
  std::optional<double> alpha0;
  std::optional<double> beta0;
  std::uint64_t seed = 0;
  std::string out;
  long resolution = 200;
  bool self_loops = false;
  double alpha_u = 1.0;
  double beta_u = 1.0;
  double sigma_b = 0.2;
  std::size_t recount_every = 0;
};

DatasetSummary train_summary(const RelationalMatrix& R) {
  DatasetSummary s;
  for (Eigen::Index i = 0; i < R.size(); ++i)
    for (Eigen::Index j = 0; j < R.size(); ++j)
      if (R.is_train(i, j)) {
        ++s.observed_cells;
        s.positive_links += R(i, j);
      }
  s.sparsity = s.observed_cells ? static_cast<double>(s.positive_links) / static_cast<double>(s.observed_cells) : 0.0;
  return s;
}

void write_predictions(std::ostream& out, const CellList& cells, const ScoredCells& sc) {
  out << "i,j,score,truth\n";
  for (std::size_t c = 0; c < cells.size(); ++c)
    out << cells[c].first << ',' << cells[c].second << ',' << format_real(sc.scores(static_cast<Eigen::Index>(c)))
        << ',' << static_cast<int>(sc.truths[c]) << '\n';
}

void cmd_fit(const FitOptions& o, std::ostream& log) {
  if (o.k < 1) throw UsageError("--k: must be at least 1");
  const ModelKind kind = parse_model_kind(o.model);
  RelationalMatrix R = load_relation(o.data, o.n, loops_flag(o.self_loops));

  if (!o.mask.empty()) {
    auto in = open_input(o.mask);
    read_mask_csv(in, R);
  } else {
    Rng split = Rng::substream(o.seed, {kSetupKey, kSplitKey});
    R = row_wise_split(std::move(R), o.train_ratio, split);
  }

  const DatasetSummary train = train_summary(R);
  const double alpha0 = o.alpha0.value_or(train.sparsity);
  const double beta0 = o.beta0.value_or(1.0 - train.sparsity);
  if (!(alpha0 > 0.0) || !(beta0 > 0.0))
    throw DataError("training sparsity is " + format_real(train.sparsity) +
                    ", so the derived Beta prior is degenerate; pass --alpha0 and --beta0");

  const Hyperparameters h = Hyperparameters::symmetric(o.k, alpha0, beta0, 1.0);
  SamplerConfig cfg;
  cfg.model = kind;
  cfg.iterations = o.iters;
  cfg.burn_in = o.burnin;
  cfg.thin = o.thin;
  cfg.seed = o.seed;
  cfg.alpha_u = o.alpha_u;
  cfg.beta_u = o.beta_u;
  cfg.sigma_B = o.sigma_b;
  cfg.recount_every = o.recount_every;
  cfg.validate();

  const fs::path dir = prepare_dir(o.out);
  Echo echo;
  echo.add("command", "fit")
      .add("model", o.model)
      .add("data", o.data)
      .add("mask", o.mask.empty() ? std::string("row-wise split") : o.mask)
      .add("n", R.size())
      .add("k", o.k)
      .add("iters", o.iters)
      .add("burnin", o.burnin)
      .add("thin", o.thin)
      .add("train_ratio", o.train_ratio)
      .add("alpha0", alpha0)
      .add("beta0", beta0)
      .add("alpha0_derived", !o.alpha0.has_value())
      .add("beta0_derived", !o.beta0.has_value())
      .add("dirichlet_concentration", 1.0)
      .add("lambda_prior_shape", h.lambda_shape)
      .add("lambda_prior_rate", h.lambda_rate)
      .add("alpha_u", o.alpha_u)
      .add("beta_u", o.beta_u)
      .add("sigma_b", o.sigma_b)
      .add("recount_every", o.recount_every)
      .add("seed", o.seed)
      .add("resolution", o.resolution)
      .add("self_loops", o.self_loops)
      .add("train_cells", train.observed_cells)
      .add("train_links", train.positive_links)
      .add("train_sparsity", train.sparsity);
  write_file(dir / "config.echo", [&](std::ostream& out) { echo.write(out); });
  write_file(dir / "mask.csv", [&](std::ostream& out) { write_mask_csv(out, R); });

  const Trace trace = run_sampler(R, h, cfg);
  write_file(dir / "trace.csv", [&](std::ostream& out) { write_trace_csv(out, trace); });
  write_file(dir / "accept.txt", [&](std::ostream& out) { write_acceptance(out, trace); });
  if (kind == ModelKind::isg || kind == ModelKind::lfsg)
    write_grid_files(dir, posterior_mean_grid(trace, o.resolution));
  if (trace.labels) {
    write_file(dir / "label_counts_sender.csv", [&](std::ostream& out) { write_grid_csv(out, trace.labels->sender); });
    write_file(dir / "label_counts_receiver.csv",
               [&](std::ostream& out) { write_grid_csv(out, trace.labels->receiver); });
  }

  const CellList test = R.cells_with_role(CellRole::test);
  if (test.empty()) throw DataError("the split left no TEST cells to evaluate");
  const ScoredCells sc = score_cells(R, test, posterior_predictive(trace, test));
  write_file(dir / "predictions.csv", [&](std::ostream& out) { write_predictions(out, test, sc); });
  const MetricsReport report = evaluate(sc);
  write_file(dir / "metrics.txt", [&](std::ostream& out) { write_metrics(out, report); });
  log << o.model << ": auc " << format_real(report.auc) << ", average precision "
      << format_real(report.average_precision) << " on " << report.n_test << " test cells -> " << dir.string()
      << '\n';
}

// ---------------------------------------------------------------------------
// export-graphon

struct ExportOptions {
  std::string state;
  std::string trace;
  std::string model;
  std::string mode;
  long resolution = 200;
  std::string out;
};

std::optional<GridMode> parse_mode(const std::string& mode) {
  if (mode.empty()) return std::nullopt;
  return mode == "piecewise" ? GridMode::piecewise : GridMode::smooth;
}

/// SBM traces store lambda = inf and MMSB traces NaN; everything else reads as smooth.
ModelKind infer_trace_kind(const Trace& trace) {
  if (trace.samples.empty()) throw DataError("trace holds no samples");
  const double lambda = trace.samples.front().lambda;
  if (std::isnan(lambda)) return ModelKind::mmsb;
  if (std::isinf(lambda)) return ModelKind::sbm;
  return ModelKind::lfsg;
}

void cmd_export(const ExportOptions& o, std::ostream& log) {
  const fs::path dir = prepare_dir(o.out);
  Eigen::MatrixXd grid;
  if (!o.state.empty()) {
    auto in = open_input(o.state);
    const auto snapshot = read_state(in);
    const auto* latent = std::get_if<LatentState>(&snapshot);
    if (!latent) throw UsageError("--state: the MMSB has no graphon to export");
    const GridMode mode = parse_mode(o.mode).value_or(latent->kind == ModelKind::sbm ? GridMode::piecewise : GridMode::smooth);
    grid = intensity_grid(latent->partition, latent->B, latent->lambda, o.resolution, mode);
  } else {
    auto in = open_input(o.trace);
    Trace trace = read_trace_csv(in, o.model.empty() ? ModelKind::lfsg : parse_model_kind(o.model));
    if (o.model.empty()) trace.kind = infer_trace_kind(trace);
    if (trace.kind == ModelKind::mmsb) throw UsageError("--trace: the MMSB has no graphon to export");
    grid = posterior_mean_grid(trace, o.resolution, parse_mode(o.mode));
  }
  write_grid_files(dir, grid);
  log << "exported " << grid.rows() << "x" << grid.cols() << " grid -> " << dir.string() << '\n';
}

// ---------------------------------------------------------------------------
// labels

struct LabelsOptions {
  std::string run;
  std::string out;
};

void write_order(std::ostream& out, const std::vector<Eigen::Index>& order) {
  for (auto i : order) out << i << '\n';
}

void cmd_labels(const LabelsOptions& o, std::ostream& log) {
  const fs::path run(o.run);
  auto echo_in = open_input(run / "config.echo");
  const auto echo = read_key_values(echo_in);
  const auto model = echo.find("model");
  if (model == echo.end()) throw DataError("config.echo in '" + o.run + "' does not name a model");
  const ModelKind kind = parse_model_kind(model->second);
  if (kind != ModelKind::lfsg && kind != ModelKind::mmsb)
    throw UsageError("run '" + o.run + "' used the " + model->second + " model, which keeps no per-cell labels");

  LabelTally tally;
  {
    auto in = open_input(run / "label_counts_sender.csv");
    tally.sender = read_grid_csv(in);
  }
  {
    auto in = open_input(run / "label_counts_receiver.csv");
    tally.receiver = read_grid_csv(in);
  }
  const fs::path dir = prepare_dir(o.out.empty() ? o.run : o.out);
  for (const auto dim : {LabelDimension::sender, LabelDimension::receiver}) {
    const std::string name = dim == LabelDimension::sender ? "sender" : "receiver";
    const Eigen::MatrixXd props = label_proportions(tally, dim);
    write_file(dir / ("labels_" + name + ".csv"), [&](std::ostream& out) { write_grid_csv(out, props); });
    write_file(dir / ("node_order_" + name + ".txt"),
               [&](std::ostream& out) { write_order(out, proportion_order(props)); });
  }
  log << "label proportions for " << tally.sender.rows() << " nodes -> " << dir.string() << '\n';
}

// ---------------------------------------------------------------------------
// subsample / summarize

struct SubsampleOptions {
  std::string data;
  std::size_t pool = 1000;
  std::size_t size = 500;
  std::uint64_t seed = 0;
  std::string out;
  bool self_loops = false;
};

void cmd_subsample(const SubsampleOptions& o, std::ostream& log) {
  auto in = open_input(o.data);
  const auto edges = read_edges(in);
  Rng rng = Rng::substream(o.seed, {kSetupKey, kSubsampleKey});
  const auto nodes = top_active_subsample(edges, o.pool, o.size, rng);
  const RelationalMatrix R = induced_relation(edges, nodes, loops_flag(o.self_loops));
  const fs::path dir = prepare_dir(o.out);
  write_file(dir / "edges.tsv", [&](std::ostream& out) { write_edge_list(out, R); });
  write_file(dir / "nodes.txt", [&](std::ostream& out) {
    for (auto id : nodes) out << id << '\n';
  });
  const DatasetSummary s = summarize(R);
  log << "kept " << nodes.size() << " nodes, " << s.positive_links << " links, sparsity " << format_real(s.sparsity)
      << " -> " << dir.string() << '\n';
}

struct SummarizeOptions {
  std::string data;
  long n = 0;
  bool self_loops = false;
};

void cmd_summarize(const SummarizeOptions& o, std::ostream& log) {
  const RelationalMatrix R = load_relation(o.data, o.n, loops_flag(o.self_loops));
  const DatasetSummary s = summarize(R);
  log << "n = " << R.size() << '\n'
      << "positive_links = " << s.positive_links << '\n'
      << "observed_cells = " << s.observed_cells << '\n'
      << "sparsity = " << format_real(s.sparsity) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smoothing graphon models for relational data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sgraphon 1.0.0");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a ground-truth state and a relation from a model");
  simulate->add_option("--model", sim.model, "sbm, isg, lfsg or mmsb")->check(CLI::IsMember(kModelNames));
  simulate->add_option("--n", sim.n, "Number of nodes")->check(CLI::PositiveNumber);
  simulate->add_option("--k", sim.k, "Number of groups")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--alpha0", sim.alpha0, "Beta prior shape for block intensities")->capture_default_str();
  simulate->add_option("--beta0", sim.beta0, "Beta prior shape for block intensities")->capture_default_str();
  simulate->add_option("--lambda", sim.lambda, "Fix the smoothing parameter instead of drawing it")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--state", sim.state, "Generate from this state snapshot")->check(CLI::ExistingFile);
  simulate->add_option("--resolution", sim.resolution, "Graphon grid resolution")
      ->check(CLI::Range(2L, 100000L))
      ->capture_default_str();
  simulate->add_flag("--self-loops", sim.self_loops, "Keep diagonal cells");

  FitOptions fit;
  auto* fitcmd = app.add_subcommand("fit", "Split, fit a model by MCMC and score held-out cells");
  fitcmd->add_option("--model", fit.model, "sbm, isg, lfsg or mmsb")->check(CLI::IsMember(kModelNames));
  fitcmd->add_option("--data", fit.data, "Edge list (.tsv/.txt) or dense 0/1 matrix (.csv)")
      ->required()
      ->check(CLI::ExistingFile);
  fitcmd->add_option("--mask", fit.mask, "Use this cell-role CSV instead of a fresh split")->check(CLI::ExistingFile);
  fitcmd->add_option("--n", fit.n, "Number of nodes (edge lists; default max id + 1)")->check(CLI::PositiveNumber);
  fitcmd->add_option("--k", fit.k, "Number of groups")->check(CLI::PositiveNumber)->capture_default_str();
  fitcmd->add_option("--iters", fit.iters, "MCMC sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  fitcmd->add_option("--burnin", fit.burnin, "Sweeps discarded before retaining")->capture_default_str();
  fitcmd->add_option("--thin", fit.thin, "Keep every thin-th sweep")->check(CLI::PositiveNumber)->capture_default_str();
  fitcmd->add_option("--train-ratio", fit.train_ratio, "Per-row TRAIN share")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  fitcmd->add_option("--alpha0", fit.alpha0, "Beta prior shape (default: TRAIN sparsity)");
  fitcmd->add_option("--beta0", fit.beta0, "Beta prior shape (default: 1 - TRAIN sparsity)");
  fitcmd->add_option("--seed", fit.seed, "Random seed")->required();
  fitcmd->add_option("--out", fit.out, "Output directory")->required();
  fitcmd->add_option("--resolution", fit.resolution, "Graphon grid resolution")
      ->check(CLI::Range(2L, 100000L))
      ->capture_default_str();
  fitcmd->add_flag("--self-loops", fit.self_loops, "Keep diagonal cells");
  fitcmd->add_option("--alpha-u", fit.alpha_u, "Beta proposal for coordinates")->capture_default_str();
  fitcmd->add_option("--beta-u", fit.beta_u, "Beta proposal for coordinates")->capture_default_str();
  fitcmd->add_option("--sigma-b", fit.sigma_b, "ISG logit random-walk step")->capture_default_str();
  fitcmd->add_option("--recount-every", fit.recount_every, "Recount label statistics every N sweeps (0 = never)")
      ->capture_default_str();

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export-graphon", "Write a graphon grid from a state snapshot or trace");
  auto* state_opt = export_cmd->add_option("--state", exp.state, "State snapshot")->check(CLI::ExistingFile);
  auto* trace_opt = export_cmd->add_option("--trace", exp.trace, "Trace CSV (posterior-mean grid)")
                        ->check(CLI::ExistingFile);
  state_opt->excludes(trace_opt);
  export_cmd->add_option("--model", exp.model, "Model of the trace (default: inferred)")
      ->check(CLI::IsMember(kModelNames));
  export_cmd->add_option("--mode", exp.mode, "smooth or piecewise (default: by model)")
      ->check(CLI::IsMember({"smooth", "piecewise"}));
  export_cmd->add_option("--resolution", exp.resolution, "Grid resolution")
      ->check(CLI::Range(2L, 100000L))
      ->capture_default_str();
  export_cmd->add_option("--out", exp.out, "Output directory")->required();

  LabelsOptions lab;
  auto* labels = app.add_subcommand("labels", "Per-node label proportions from an LFSG or MMSB fit");
  labels->add_option("--run", lab.run, "Output directory of a fit run")->required()->check(CLI::ExistingDirectory);
  labels->add_option("--out", lab.out, "Output directory (default: the run directory)");

  SubsampleOptions sub;
  auto* subsample = app.add_subcommand("subsample", "Keep a random subset of the most active nodes");
  subsample->add_option("--data", sub.data, "Edge list")->required()->check(CLI::ExistingFile);
  subsample->add_option("--pool", sub.pool, "Most active nodes to sample from")->capture_default_str();
  subsample->add_option("--size", sub.size, "Nodes to keep")->capture_default_str();
  subsample->add_option("--seed", sub.seed, "Random seed")->required();
  subsample->add_option("--out", sub.out, "Output directory")->required();
  subsample->add_flag("--self-loops", sub.self_loops, "Keep diagonal cells");

  SummarizeOptions sum;
  auto* summarize_cmd = app.add_subcommand("summarize", "Print link count and sparsity");
  summarize_cmd->add_option("--data", sum.data, "Edge list or dense CSV")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--n", sum.n, "Number of nodes")->check(CLI::PositiveNumber);
  summarize_cmd->add_flag("--self-loops", sum.self_loops, "Keep diagonal cells");

  try {
    // CLI11 consumes vector arguments from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (export_cmd->parsed() && exp.state.empty() && exp.trace.empty())
      throw CLI::ValidationError("export-graphon", "one of --state or --trace is required");
    if (fitcmd->parsed() && !(fit.train_ratio > 0.0 && fit.train_ratio < 1.0))
      throw CLI::ValidationError("--train-ratio", "must lie strictly between 0 and 1");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (simulate->parsed()) cmd_simulate(sim, out);
    else if (fitcmd->parsed()) cmd_fit(fit, out);
    else if (export_cmd->parsed()) cmd_export(exp, out);
    else if (labels->parsed()) cmd_labels(lab, out);
    else if (subsample->parsed()) cmd_subsample(sub, out);
    else if (summarize_cmd->parsed()) cmd_summarize(sum, out);
    return ok;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_error;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sgraphon::cli
