#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "shaprob/csv.hpp"
#include "shaprob/dataset.hpp"
#include "shaprob/error.hpp"
#include "shaprob/game.hpp"
#include "shaprob/report.hpp"
#include "shaprob/shapley.hpp"
#include "shaprob/uncertainty.hpp"

namespace shaprob::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"explain-auc", "explain-roc",    "explain-prc", "explain-auprc",
                                            "uncertainty", "feature-select", "duplicate"};

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null())
    v = j.at(key).get<T>();
  else
    v.reset();
}

Target scalar_target(const std::string& name) {
  if (name == "auc") return Target::auc();
  if (name == "auprc") return Target::auprc();
  throw Error(ErrorKind::InvalidArgument, "target '" + name + "' is not a scalar target (auc|auprc)");
}

void validate(const RunManifest& m) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (std::find(kCommands.begin(), kCommands.end(), m.command) == kCommands.end())
    fail("unknown command '" + m.command + "'");
  if (m.input.empty()) fail("--input is required");
  if (m.label.empty()) fail("--label must be non-empty");
  if (!(m.train_fraction > 0.0 && m.train_fraction < 1.0)) fail("--train-fraction must lie in (0,1)");
  parse_strategy(m.strategy);
  if (m.grid < 2) fail("--grid needs at least 2 points");
  if (m.fpr && !(*m.fpr >= 0.0 && *m.fpr <= 1.0)) fail("--fpr must lie in [0,1]");
  if (m.recall && !(*m.recall >= 0.0 && *m.recall <= 1.0)) fail("--recall must lie in [0,1]");
  if (m.imbalance && !(*m.imbalance > 0.0 && *m.imbalance < 1.0)) fail("--imbalance must lie in (0,1)");
  if (m.sampled && *m.sampled < 1) fail("--sampled needs at least 1 permutation");
  if (m.target != "auc" && m.target != "auprc" && m.target != "roc" && m.target != "prc")
    fail("--target must be one of auc, auprc, roc, prc");
  if (m.command == "uncertainty" && m.iterations < 2) fail("--iterations must be at least 2");
  if (m.command == "feature-select") {
    if (m.drop.empty()) fail("--drop needs at least one feature name");
    scalar_target(m.target);
  }
  if (m.command == "duplicate") {
    if (m.feature.empty()) fail("--feature is required");
    scalar_target(m.target);
  }
  if (m.out.empty()) fail("--out must be non-empty");
}

/// Collects the human-readable summary; echoed to stdout and summary.txt.
class Summary {
 public:
  void line(const std::string& key, const std::string& value) { os_ << key << ": " << value << '\n'; }
  void attribution(const Attribution& a, const std::string& metric) {
    line("target", a.target_tag);
    line(metric, percent_label(a.total));
    line("baseline", percent_label(a.baseline));
    const auto order = a.order_by_magnitude();
    if (!order.empty()) line("top feature", a.names[order.front()]);
    for (auto i : order) line("  " + a.names[i], (a.values[i] >= 0.0 ? "+" : "") + percent_label(a.values[i]));
  }
  void warnings(const std::vector<std::string>& w) {
    line("warnings", std::to_string(w.size()));
    for (const auto& s : w) os_ << "  " << s << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

struct Partitions {
  Dataset train;
  Dataset test;
};

Dataset load(const RunManifest& m) {
  auto d = load_csv(m.input, m.label);
  if (m.imbalance) d = subsample_imbalance(d, ImbalanceSpec{*m.imbalance, m.seed});
  return d;
}

Partitions partition(const Dataset& d, const RunManifest& m) {
  auto [train, test] = split(d, SplitSpec{m.train_fraction, m.seed});
  return {std::move(train), std::move(test)};
}

Attribution attribute(CoalitionEvaluator& ev, const Target& t, const RunManifest& m, const fs::path& dir,
                      const std::string& stem) {
  if (m.sampled) return shapley_sampled(ev, t, SamplingOptions{*m.sampled, m.seed, m.threads});
  const auto table = evaluate_all(ev, t, ExactOptions{m.max_exact, m.threads});
  write_payoff_csv(table, (dir / (stem + "payoffs.csv")).string());
  return shapley_exact(table);
}

void emit_attribution(const Attribution& a, const fs::path& dir, const std::string& stem) {
  write_attribution_csv(a, dir / (stem + "attribution.csv"));
  write_text(render_svg(waterfall(a)), dir / (stem + "waterfall.svg"));
}

void emit_model_curves(CoalitionEvaluator& ev, const fs::path& dir) {
  const auto grand = ev.outcome(Coalition::grand(ev.players()));
  if (grand->degenerate()) return;
  write_curve_csv(grand->roc->points(), dir / "roc.csv");
  write_curve_csv(grand->pr->points(), dir / "prc.csv");
}

void explain_scalar(const RunManifest& m, const Target& t, const Dataset& d, const fs::path& dir, Summary& s) {
  auto [train, test] = partition(d, m);
  s.line("rows", "train " + std::to_string(train.rows()) + ", test " + std::to_string(test.rows()));
  s.line("features", std::to_string(d.features()));
  CoalitionEvaluator ev(std::move(train), std::move(test));
  const auto a = attribute(ev, t, m, dir, "");
  emit_attribution(a, dir, "");
  emit_model_curves(ev, dir);
  s.attribution(a, t.kind == TargetKind::Auc ? "model AUC" : "model AUPRC");
  s.line("mode", m.sampled ? "sampled (" + std::to_string(*m.sampled) + " permutations)" : "exact");
  s.line("trainings", std::to_string(ev.trainings()));
  s.warnings(ev.warnings());
}

void explain_curve(const RunManifest& m, TargetKind kind, const Dataset& d, const fs::path& dir, Summary& s) {
  const auto strategy = parse_strategy(m.strategy);
  auto [train, test] = partition(d, m);
  s.line("rows", "train " + std::to_string(train.rows()) + ", test " + std::to_string(test.rows()));
  s.line("features", std::to_string(d.features()));
  CoalitionEvaluator ev(std::move(train), std::move(test));
  const auto grid = uniform_grid(m.grid);

  CurveAttribution ca;
  if (m.sampled) {
    ca = shapley_curve_sampled(ev, kind, grid, strategy, SamplingOptions{*m.sampled, m.seed, m.threads});
  } else {
    const auto tables = evaluate_slices(ev, kind, grid, strategy, ExactOptions{m.max_exact, m.threads});
    ca = shapley_curve(tables);
  }
  write_curve_attribution_csv(ca, dir / "curve_attribution.csv");
  const auto curves = contribution_curves(ca);
  write_text(render_svg(curves), dir / "contributions.svg");
  const auto relative = relative_contributions(ca);
  write_text(render_svg(relative), dir / "relative.svg");
  write_series_csv(relative, dir / "relative.csv");
  emit_model_curves(ev, dir);

  const bool roc = kind == TargetKind::RocSlice;
  s.line("target", ca.target_tag);
  s.line("grid points", std::to_string(grid.size()));
  s.line("strategy", m.strategy);

  const auto slice_at = roc ? m.fpr : m.recall;
  if (slice_at) {
    const Target t{kind, *slice_at, strategy};
    const auto a = attribute(ev, t, m, dir, "slice_");
    emit_attribution(a, dir, "slice_");
    s.attribution(a, roc ? "model TPR" : "model precision");
  }

  if (roc && !m.sampled && strategy == Strategy::Interpolation && grid.size() >= 11) {
    const auto area = shapley_exact(evaluate_all(ev, Target::auc(), ExactOptions{m.max_exact, m.threads}));
    const auto gap = auc_roc_consistency(area, ca);
    s.line("curve vs AUC attribution", "|integral of curve - phi_AUC|");
    for (std::size_t i = 0; i < gap.size(); ++i)
      s.line("  " + area.names[i], csv::number(gap[i]));
  }
  s.line("mode", m.sampled ? "sampled (" + std::to_string(*m.sampled) + " permutations)" : "exact");
  s.line("trainings", std::to_string(ev.trainings()));
  s.warnings(ev.warnings());
}

void uncertainty(const RunManifest& m, const Dataset& d, const fs::path& dir, Summary& s) {
  McConfig cfg;
  cfg.iterations = m.iterations;
  cfg.base_seed = m.seed;
  cfg.train_fraction = m.train_fraction;
  cfg.grid = uniform_grid(m.grid);
  cfg.threads = m.threads;
  cfg.max_features = m.max_exact;
  cfg.samples = m.sampled.value_or(0);

  const auto curves = mc_curves(d, cfg);
  write_band_csv(curves.roc, dir / "roc_band.csv");
  write_band_csv(curves.prc, dir / "prc_band.csv");
  auto roc_plot = banded_plot(curves.roc);
  roc_plot.title = "ROC over " + std::to_string(cfg.iterations) + " iterations";
  roc_plot.x_label = "false positive rate";
  roc_plot.y_label = "true positive rate";
  write_text(render_svg(roc_plot), dir / "roc_band.svg");
  auto prc_plot = banded_plot(curves.prc);
  prc_plot.title = "PRC over " + std::to_string(cfg.iterations) + " iterations";
  prc_plot.x_label = "recall";
  prc_plot.y_label = "precision";
  write_text(render_svg(prc_plot), dir / "prc_band.svg");
  s.line("iterations", std::to_string(cfg.iterations));
  s.line("seeds", std::to_string(cfg.seed_of(0)) + ".." + std::to_string(cfg.seed_of(cfg.iterations - 1)));

  if (m.target == "auc" || m.target == "auprc") {
    const auto a = mc_attributions(d, cfg, scalar_target(m.target));
    write_mc_attribution_csv(a, dir / "mc_attribution.csv");
    write_text(render_whiskers(a), dir / "mc_attribution.svg");
    s.line("target", a.target_tag);
    s.line("mean payoff", percent_label(a.mean_payoff));
    for (std::size_t i = 0; i < a.names.size(); ++i)
      s.line("  " + a.names[i], percent_label(a.mean[i]) + " +/- " + percent_label(a.stddev[i]));
    return;
  }

  const auto kind = m.target == "roc" ? TargetKind::RocSlice : TargetKind::PrcSlice;
  const auto bands = mc_curve_attributions(d, cfg, kind, parse_strategy(m.strategy));
  csv::Table t;
  t.header = {"abscissa"};
  for (const auto& name : bands.names) {
    t.header.push_back(name + "_mean");
    t.header.push_back(name + "_std");
  }
  for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
    std::vector<std::string> row{csv::number(cfg.grid[k])};
    for (const auto& b : bands.per_feature) {
      row.push_back(csv::number(b.mean[k]));
      row.push_back(csv::number(b.stddev[k]));
    }
    t.rows.push_back(std::move(row));
  }
  csv::write(t, dir / "mc_curve_attribution.csv");
  auto plot = banded_plot(bands.per_feature, "Feature contributions, " + bands.target_tag);
  plot.x_label = kind == TargetKind::RocSlice ? "false positive rate" : "recall";
  plot.y_label = "contribution";
  write_text(render_svg(plot), dir / "mc_curve_attribution.svg");
  s.line("target", bands.target_tag);
}

void feature_select(const RunManifest& m, const Dataset& d, const fs::path& dir, Summary& s) {
  for (const auto& name : m.drop) {
    const auto& names = d.feature_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw Error(ErrorKind::InvalidArgument, "--drop names unknown feature '" + name + "'");
  }
  if (m.drop.size() >= d.features()) throw Error(ErrorKind::InvalidArgument, "--drop would remove every feature");
  const auto t = scalar_target(m.target);
  auto [train, test] = partition(d, m);

  CoalitionEvaluator full(train, test);
  const auto a_full = attribute(full, t, m, dir, "full_");
  emit_attribution(a_full, dir, "full_");

  CoalitionEvaluator reduced(drop_features(train, m.drop), drop_features(test, m.drop));
  const auto a_reduced = attribute(reduced, t, m, dir, "reduced_");
  emit_attribution(a_reduced, dir, "reduced_");

  std::string dropped;
  for (const auto& n : m.drop) dropped += (dropped.empty() ? "" : ",") + n;
  const double delta = a_reduced.total - a_full.total;
  const std::string metric = t.kind == TargetKind::Auc ? "AUC" : "AUPRC";
  s.line("dropped", dropped);
  s.line("full " + metric, percent_label(a_full.total));
  s.line("reduced " + metric, percent_label(a_reduced.total));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f points", delta * 100.0);
  s.line("delta", buf);
}

void duplicate(const RunManifest& m, const Dataset& d, const fs::path& dir, Summary& s) {
  const auto name = m.name.empty() ? m.feature + "_dup" : m.name;
  const auto dup = duplicate_feature(d, d.index_of(m.feature), name);
  write_csv(dup, dir / "duplicated.csv", m.label);
  s.line("duplicated", m.feature + " as " + name);
  explain_scalar(m, scalar_target(m.target), dup, dir, s);
}

void write_error(const fs::path& dir, const std::string& kind, const std::string& category, const std::string& what,
                 int code) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;
  std::ofstream out(dir / "error.json", std::ios::binary);
  out << json{{"kind", kind}, {"category", category}, {"message", what}, {"exit_code", code}}.dump(2) << '\n';
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Argument: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Computation: return 4;
  }
  return 4;
}

std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Argument: return "argument";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Computation: return "computation";
  }
  return "computation";
}

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["input"] = m.input;
  j["label"] = m.label;
  j["target"] = m.target;
  j["strategy"] = m.strategy;
  j["train_fraction"] = m.train_fraction;
  j["seed"] = m.seed;
  j["grid"] = m.grid;
  put_optional(j, "fpr", m.fpr);
  put_optional(j, "recall", m.recall);
  put_optional(j, "imbalance", m.imbalance);
  put_optional(j, "sampled", m.sampled);
  j["max_exact"] = m.max_exact;
  j["threads"] = m.threads;
  j["iterations"] = m.iterations;
  j["drop"] = m.drop;
  j["feature"] = m.feature;
  j["name"] = m.name;
  j["out"] = m.out;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.input = j.at("input").get<std::string>();
    m.label = j.value("label", m.label);
    m.target = j.value("target", m.target);
    m.strategy = j.value("strategy", m.strategy);
    m.train_fraction = j.value("train_fraction", m.train_fraction);
    m.seed = j.value("seed", m.seed);
    m.grid = j.value("grid", m.grid);
    get_optional(j, "fpr", m.fpr);
    get_optional(j, "recall", m.recall);
    get_optional(j, "imbalance", m.imbalance);
    get_optional(j, "sampled", m.sampled);
    m.max_exact = j.value("max_exact", m.max_exact);
    m.threads = j.value("threads", m.threads);
    m.iterations = j.value("iterations", m.iterations);
    m.drop = j.value("drop", m.drop);
    m.feature = j.value("feature", m.feature);
    m.name = j.value("name", m.name);
    m.out = j.value("out", m.out);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void execute(const RunManifest& m, std::ostream& out) {
  validate(m);
  const fs::path dir(m.out);
  fs::create_directories(dir);
  fs::remove(dir / "error.json");
  write_text(manifest_to_json(m), dir / "manifest.json");

  const auto d = load(m);
  Summary s;
  s.line("command", m.command);
  s.line("input", m.input);
  s.line("seed", std::to_string(m.seed));
  if (m.imbalance)
    s.line("positive fraction", csv::number(*m.imbalance) + " (" + std::to_string(d.positives()) + " of " +
                                    std::to_string(d.rows()) + " rows)");

  if (m.command == "explain-auc") explain_scalar(m, Target::auc(), d, dir, s);
  else if (m.command == "explain-auprc") explain_scalar(m, Target::auprc(), d, dir, s);
  else if (m.command == "explain-roc") explain_curve(m, TargetKind::RocSlice, d, dir, s);
  else if (m.command == "explain-prc") explain_curve(m, TargetKind::PrcSlice, d, dir, s);
  else if (m.command == "uncertainty") uncertainty(m, d, dir, s);
  else if (m.command == "feature-select") feature_select(m, d, dir, s);
  else if (m.command == "duplicate") duplicate(m, d, dir, s);

  write_text(s.str(), dir / "summary.txt");
  out << s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapley attributions of classifier AUC, ROC, AUPRC and PRC to input features", "shaprob"};
  app.require_subcommand(1);

  RunManifest m;
  double fpr = 0.0, recall = 0.0, imbalance = 0.0;
  std::size_t sampled = 0;
  std::string manifest_path;
  std::vector<std::pair<CLI::App*, std::vector<CLI::Option*>>> optionals;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", m.input, "CSV file with a header row")->required();
    sub->add_option("--label", m.label, "Label column (0/1)")->capture_default_str();
    sub->add_option("--out,-o", m.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", m.seed, "Seed for splitting, sub-sampling and permutations")->capture_default_str();
    sub->add_option("--train-fraction", m.train_fraction, "Share of rows used for training")->capture_default_str();
    sub->add_option("--grid", m.grid, "Points on the [0,1] grid")->capture_default_str();
    sub->add_option("--strategy", m.strategy, "optimistic|pessimistic|interpolation")->capture_default_str();
    sub->add_option("--max-exact", m.max_exact, "Largest feature count for exact mode")->capture_default_str();
    sub->add_option("--threads", m.threads, "Worker threads (0 = all cores)")->capture_default_str();
    auto* imb = sub->add_option("--imbalance", imbalance, "Sub-sample to this positive fraction first");
    auto* smp = sub->add_option("--sampled", sampled, "Use N sampled permutations instead of exact enumeration");
    optionals.push_back({sub, {imb, smp}});
  };

  auto* auc = app.add_subcommand("explain-auc", "Attribute AUC");
  common(auc);
  auto* auprc = app.add_subcommand("explain-auprc", "Attribute AUPRC");
  common(auprc);
  auto* roc = app.add_subcommand("explain-roc", "Attribute TPR at every FPR on the grid");
  common(roc);
  auto* fpr_opt = roc->add_option("--fpr", fpr, "Also attribute this single FPR slice");
  auto* prc = app.add_subcommand("explain-prc", "Attribute precision at every recall on the grid");
  common(prc);
  auto* recall_opt = prc->add_option("--recall", recall, "Also attribute this single recall slice");
  auto* unc = app.add_subcommand("uncertainty", "Monte-Carlo cross-validation bands");
  common(unc);
  unc->add_option("--iterations", m.iterations, "Monte-Carlo iterations (>= 2)")->capture_default_str();
  unc->add_option("--target", m.target, "auc|auprc|roc|prc")->capture_default_str();
  auto* fs_cmd = app.add_subcommand("feature-select", "Compare the full feature set with a reduced one");
  common(fs_cmd);
  fs_cmd->add_option("--drop", m.drop, "Feature names to remove")->required()->delimiter(',');
  fs_cmd->add_option("--target", m.target, "auc|auprc")->capture_default_str();
  auto* dup = app.add_subcommand("duplicate", "Duplicate a feature column, then attribute");
  common(dup);
  dup->add_option("--feature", m.feature, "Feature to duplicate")->required();
  dup->add_option("--name", m.name, "Name of the copy (default <feature>_dup)");
  dup->add_option("--target", m.target, "auc|auprc")->capture_default_str();
  auto* replay = app.add_subcommand("replay", "Re-run a manifest.json");
  replay->add_option("manifest", manifest_path, "Path to manifest.json")->required();
  std::string replay_out;
  replay->add_option("--out,-o", replay_out, "Override the output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string out_dir = m.out;
  try {
    if (replay->parsed()) {
      std::ifstream in(manifest_path, std::ios::binary);
      if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read manifest '" + manifest_path + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      m = manifest_from_json(buf.str());
      if (!replay_out.empty()) m.out = replay_out;
    } else {
      for (auto* sub : app.get_subcommands()) m.command = sub->get_name();
      for (const auto& [sub, opts] : optionals) {
        if (!sub->parsed()) continue;
        if (opts[0]->count()) m.imbalance = imbalance;
        if (opts[1]->count()) m.sampled = sampled;
      }
      if (fpr_opt->count()) m.fpr = fpr;
      if (recall_opt->count()) m.recall = recall;
    }
    out_dir = m.out;
    execute(m, out);
    return 0;
  } catch (const Error& e) {
    const int code = exit_code(e.category());
    err << "error: " << e.what() << '\n';
    write_error(out_dir, std::string(shaprob::to_string(e.kind())), std::string(to_string(e.category())), e.what(),
                code);
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    write_error(out_dir, "Internal", "computation", e.what(), 4);
    return 4;
  }
}

}  // namespace shaprob::cli
