#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>

#include "slopp/circuit.hpp"
#include "slopp/inference.hpp"
#include "slopp/io.hpp"
#include "slopp/learner.hpp"
#include "slopp/vtree_learn.hpp"

namespace slopp::cli {

namespace {

constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;

constexpr const char* kReportHelp = R"(
Reports end with one machine-readable line:
  report command=<cmd> [k=<int> d=<int> seed=<int> vtree=<source>] data=<path>
         ll=<%.17g> gamma=<int> consistent=<int> nodes=<int> edges=<int>
         parameters=<int>
ll is the natural-log likelihood summed over records consistent with the
model; gamma counts the inconsistent ones (record multiplicities included).
nodes counts input units + product units (elements) + sum units; edges counts
sum->element and element->prime/sub arcs; parameters counts free weights.
Wall time goes to standard error so standard output is reproducible.)";

struct RunReport {
  std::string command;
  std::optional<LearnConfig> config;
  std::string vtree_source;
  std::string data;
  EvalReport eval;
  CircuitSize size;
};

void print(const RunReport& r, std::ostream& out) {
  out << "command      " << r.command << '\n';
  if (r.config) {
    out << "k            " << r.config->k << '\n'
        << "d            " << r.config->min_cluster << '\n'
        << "seed         " << r.config->seed << '\n'
        << "vtree        " << r.vtree_source << '\n';
  }
  out << "data         " << r.data << '\n'
      << "LL_C         " << format_double(r.eval.ll) << '\n'
      << "gamma        " << r.eval.gamma << '\n'
      << "consistent   " << r.eval.consistent_count << '\n'
      << "|C|          " << r.size.nodes << " (" << r.size.input_units << " input + "
      << r.size.product_units << " product + " << r.size.sum_units << " sum units)\n"
      << "edges        " << r.size.edges << '\n'
      << "parameters   " << r.size.parameters << '\n';

  out << "report command=" << r.command;
  if (r.config) {
    out << " k=" << r.config->k << " d=" << r.config->min_cluster << " seed=" << r.config->seed
        << " vtree=" << r.vtree_source;
  }
  out << " data=" << r.data << " ll=" << format_double(r.eval.ll) << " gamma=" << r.eval.gamma
      << " consistent=" << r.eval.consistent_count << " nodes=" << r.size.nodes
      << " edges=" << r.size.edges << " parameters=" << r.size.parameters << '\n';
}

Circuit load_model(const std::string& model, const std::string& vtree) {
  return vtree.empty() ? read_psdd(model) : read_psdd(model, read_vtree(vtree));
}

struct LearnFlags {
  std::string data;
  std::string vtree;
  std::string vtree_method;
  std::string test;
  std::string out;
  LearnConfig config;
  bool baseline = false;
};

int cmd_learn(const LearnFlags& f, std::ostream& out) {
  Dataset train = load_dataset(f.data);
  RunReport report;
  report.command = "learn";
  std::optional<Circuit> model;
  if (f.baseline) {
    report.vtree_source = "rightlinear";
    model.emplace(fully_factorized(train));
  } else {
    Vtree vtree = f.vtree.empty()
                      ? learn_vtree(train, parse_vtree_method(f.vtree_method), f.config.seed)
                      : read_vtree(f.vtree);
    report.vtree_source = f.vtree.empty() ? f.vtree_method : f.vtree;
    report.config = f.config;
    model.emplace(slopp(train, vtree, f.config));
  }

  if (!f.out.empty()) {
    write_vtree(model->vtree(), vtree_path_for(f.out));
    write_psdd(*model, f.out);
  }
  if (f.test.empty()) {
    report.data = f.data;
    report.eval = dataset_ll(*model, train);
  } else {
    report.data = f.test;
    report.eval = dataset_ll(*model, load_dataset(f.test));
  }
  report.size = size(*model);
  print(report, out);
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& vtree, const std::string& data,
             bool per_record, std::ostream& out) {
  Circuit model = load_model(model_path, vtree);
  Dataset test = load_dataset(data);
  RunReport report;
  report.command = "eval";
  report.data = data;
  report.eval = dataset_ll(model, test, per_record);
  report.size = size(model);
  if (per_record) {
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto& r = test.record(i);
      out << "record ";
      for (std::size_t j = 0; j < r.values.size(); ++j) out << (j ? "," : "") << int(r.values[j]);
      out << " count=" << r.count << " logp=" << format_double(report.eval.per_record[i]) << '\n';
    }
  }
  print(report, out);
  return 0;
}

int cmd_check(const std::string& model_path, const std::string& vtree, std::ostream& out) {
  Circuit model = load_model(model_path, vtree);
  ValidationReport report = validate(model);
  for (const auto& v : report.violations) out << "violation " << v.message << '\n';
  if (!report.ok()) {
    out << "invalid: " << report.violations.size() << " violation(s)\n";
    return kExitInput;
  }
  out << "valid\n";
  return 0;
}

int cmd_support(const std::string& model_path, const std::string& vtree, std::size_t limit,
                std::ostream& out) {
  Circuit model = load_model(model_path, vtree);
  for (const auto& e : enumerate_support(model, limit)) {
    for (std::size_t j = 0; j < e.assignment.size(); ++j) {
      out << (j ? "," : "") << int(e.assignment[j]);
    }
    out << ' ' << format_double(e.probability) << '\n';
  }
  return 0;
}

int cmd_vtree(const std::string& data, const std::string& method, std::uint64_t seed,
              const std::string& out_path, std::ostream& out) {
  Vtree vtree = learn_vtree(load_dataset(data), parse_vtree_method(method), seed);
  if (out_path.empty()) {
    format_vtree(vtree, out);
  } else {
    write_vtree(vtree, out_path);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn and evaluate probabilistic sentential decision diagrams", "slopp"};
  app.footer(kReportHelp);
  app.require_subcommand(1);

  const std::vector<std::string> methods{"balanced", "rightlinear", "right-linear",
                                         "random", "chowliu", "chow-liu"};

  LearnFlags learn;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a PSDD from a dataset");
  learn_cmd->add_option("--data", learn.data, "Training data (comma-separated 0/1 rows)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* vtree_file = learn_cmd->add_option("--vtree", learn.vtree, "Vtree file")
                         ->check(CLI::ExistingFile);
  auto* vtree_method = learn_cmd->add_option("--vtree-method", learn.vtree_method,
                                             "Learn the vtree: balanced|rightlinear|random|chowliu")
                           ->check(CLI::IsMember(methods));
  vtree_file->excludes(vtree_method);
  learn_cmd->add_option("--k", learn.config.k, "Clusters per sum unit")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn_cmd->add_option("--min-cluster", learn.config.min_cluster,
                        "Minimum records needed to cluster (d)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn_cmd->add_option("--seed", learn.config.seed, "Random seed")->capture_default_str();
  learn_cmd->add_option("--max-iters", learn.config.max_kmeans_iters, "k-means iteration cap")
      ->capture_default_str();
  learn_cmd->add_option("--smoothing", learn.config.smoothing,
                        "Laplace pseudo-count for weights (0 = raw frequencies)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  learn_cmd->add_flag("--dedup", learn.config.dedup, "Merge identical sub-circuits");
  learn_cmd->add_flag("--baseline", learn.baseline,
                      "Learn the fully-factorized baseline instead (ignores vtree flags)");
  learn_cmd->add_option("--test", learn.test, "Evaluate on this dataset instead of the training one")
      ->check(CLI::ExistingFile);
  learn_cmd->add_option("--out", learn.out,
                        "Model path (.psdd); the vtree is written next to it as .vtree");

  std::string model, model_vtree, data;
  bool per_record = false;
  auto* eval_cmd = app.add_subcommand("eval", "Log-likelihood of a dataset under a model");
  eval_cmd->add_option("--model", model, "Model file (.psdd)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--vtree", model_vtree, "Vtree file (default: model path with .vtree)");
  eval_cmd->add_option("--data", data, "Test data")->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--per-record", per_record, "Print the log-probability of every record");

  auto* check_cmd = app.add_subcommand("check", "Validate a model's PSDD invariants");
  check_cmd->add_option("--model", model, "Model file (.psdd)")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--vtree", model_vtree, "Vtree file (default: model path with .vtree)");

  std::size_t limit = 20;
  auto* support_cmd = app.add_subcommand("support", "Print every world with positive probability");
  support_cmd->add_option("--model", model, "Model file (.psdd)")->required()->check(CLI::ExistingFile);
  support_cmd->add_option("--vtree", model_vtree, "Vtree file (default: model path with .vtree)");
  support_cmd->add_option("--limit", limit, "Maximum number of variables")->capture_default_str();

  std::string method = "balanced", vtree_out;
  std::uint64_t vtree_seed = 0;
  auto* vtree_cmd = app.add_subcommand("vtree", "Build a vtree for a dataset");
  vtree_cmd->add_option("--data", data, "Dataset")->required()->check(CLI::ExistingFile);
  vtree_cmd->add_option("--method", method, "balanced|rightlinear|random|chowliu")
      ->capture_default_str()
      ->check(CLI::IsMember(methods));
  vtree_cmd->add_option("--seed", vtree_seed, "Seed for the random method")->capture_default_str();
  vtree_cmd->add_option("--out", vtree_out, "Output path (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (learn_cmd->parsed() && !learn.baseline && learn.vtree.empty() &&
        learn.vtree_method.empty()) {
      throw CLI::ValidationError("learn", "one of --vtree or --vtree-method is required");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (learn_cmd->parsed()) {
      code = cmd_learn(learn, out);
    } else if (eval_cmd->parsed()) {
      code = cmd_eval(model, model_vtree, data, per_record, out);
    } else if (check_cmd->parsed()) {
      code = cmd_check(model, model_vtree, out);
    } else if (support_cmd->parsed()) {
      code = cmd_support(model, model_vtree, limit, out);
    } else if (vtree_cmd->parsed()) {
      code = cmd_vtree(data, method, vtree_seed, vtree_out, out);
    }
  } catch (const FileFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << "wall_time_s=" << elapsed.count() << '\n';
  return code;
}

}  // namespace slopp::cli
