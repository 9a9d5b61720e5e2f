#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "scref/flatten.hpp"
#include "scref/parser.hpp"
#include "scref/refiner.hpp"
#include "scref/relation.hpp"

namespace scref {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << content;
}

Statechart load_model(const std::string& path) { return parse_statechart(read_file(path), path); }

std::size_t max_configurations() {
  std::size_t bound = FlattenOptions{}.max_configurations;
  if (const char* env = std::getenv("SCREF_MAX_CONFIGS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw UsageError(std::string("SCREF_MAX_CONFIGS must be a positive integer, got '") + env + "'");
    bound = static_cast<std::size_t>(v);
  }
  return bound;
}

struct ValidateArgs {
  std::string original, refined, mapping, json;
  bool fail_fast = false;
  bool require_complete = false;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  Statechart original = load_model(a.original);
  Statechart refined = load_model(a.refined);
  RefinementMapping mapping;
  if (!a.mapping.empty()) mapping = parse_mapping(read_file(a.mapping), original, refined, a.mapping);
  CheckOptions options;
  options.fail_fast = a.fail_fast;
  options.require_complete = a.require_complete;
  options.max_configurations = max_configurations();
  auto report = check_refinement(original, refined, mapping, options);
  out << report_to_text(report);
  if (!a.json.empty()) write_file(a.json, report_to_json(report), out);
  return report.valid ? kExitOk : kExitInvalid;
}

struct RefineArgs {
  std::string model, script, out_model, out_mapping, out_manifest;
  bool dry_run = false;
  bool force = false;
};

int cmd_refine(const RefineArgs& a, std::ostream& out, std::ostream& err) {
  Statechart model = load_model(a.model);
  RefinementScript script = parse_script(read_file(a.script), a.script);
  ScriptResult result = apply_script(model, script);
  if (a.dry_run) {
    for (const auto& s : result.steps) {
      out << "step " << s.index << " (" << s.rule << ")";
      if (s.created.empty()) out << ": no new elements";
      for (std::size_t i = 0; i < s.created.size(); ++i) out << (i ? ", " : ": created ") << s.created[i];
      out << "\n";
      for (const auto& c : s.constraints) out << "  checks " << c << "\n";
    }
    return kExitOk;
  }
  if (a.out_model.empty() || a.out_mapping.empty())
    throw UsageError("refine needs --out-model and --out-mapping unless --dry-run is given");
  CheckOptions options;
  options.max_configurations = max_configurations();
  auto report = check_refinement(model, result.model, result.mapping, options);
  if (!report.valid) {
    err << report_to_text(report);
    if (!a.force) {
      err << "error: refined model is not a valid refinement; nothing written (use --force)\n";
      return kExitInvalid;
    }
  }
  write_file(a.out_model, serialize_statechart(result.model), out);
  write_file(a.out_mapping, serialize_mapping(result.mapping), out);
  if (!a.out_manifest.empty()) write_file(a.out_manifest, manifest_to_json(result), out);
  return report.valid ? kExitOk : kExitInvalid;
}

int cmd_flatten(const std::string& model_path, const std::string& out_path, std::ostream& out) {
  Statechart model = load_model(model_path);
  auto flat = flatten(model, FlattenOptions{max_configurations()});
  std::string text = serialize_statechart(flat_to_model(flat));
  write_file(out_path.empty() ? "-" : out_path, text, out);
  return kExitOk;
}

int cmd_lts(const std::string& model_path, std::ostream& out) {
  Statechart model = load_model(model_path);
  auto flat = flatten(model, FlattenOptions{max_configurations()});
  std::vector<std::string> lines;
  for (const auto& e : flat.transitions)
    lines.push_back(flat.configuration_id(e.source) + " -- " + edge_label(e.trigger, e.guard, e.outputs) +
                    " --> " + flat.configuration_id(e.target));
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statechart refinement checker", "scref"};
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check that a refined model refines an original");
  validate->add_option("--original", va.original, "Original model")->required();
  validate->add_option("--refined", va.refined, "Refined model")->required();
  validate->add_option("--mapping", va.mapping, "Mapping file (refined => original)");
  validate->add_flag("--fail-fast", va.fail_fast, "Stop after the first failing check family");
  validate->add_flag("--require-complete", va.require_complete, "Treat remaining abstract elements as failures");
  validate->add_option("--json", va.json, "Write the JSON report to this file ('-' for stdout)");

  RefineArgs ra;
  auto* refine = app.add_subcommand("refine", "Apply a refinement script");
  refine->add_option("--model", ra.model, "Input model")->required();
  refine->add_option("--script", ra.script, "Refinement script")->required();
  refine->add_option("--out-model", ra.out_model, "Refined model output");
  refine->add_option("--out-mapping", ra.out_mapping, "Mapping output");
  refine->add_option("--out-manifest", ra.out_manifest, "Constraint manifest output (JSON)");
  refine->add_flag("--dry-run", ra.dry_run, "Print the planned elements without writing");
  refine->add_flag("--force", ra.force, "Write the result even if it does not validate");

  std::string flat_model, flat_out;
  auto* flat = app.add_subcommand("flatten", "Flatten a model into configurations");
  flat->add_option("--model", flat_model, "Input model")->required();
  flat->add_option("--out", flat_out, "Output file (default stdout)");

  std::string lts_model;
  auto* lts = app.add_subcommand("lts", "Print the configuration graph");
  lts->add_option("--model", lts_model, "Input model")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Error& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (validate->parsed()) return cmd_validate(va, out);
    if (refine->parsed()) return cmd_refine(ra, out, err);
    if (flat->parsed()) return cmd_flatten(flat_model, flat_out, out);
    if (lts->parsed()) return cmd_lts(lts_model, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
  } catch (const RefinementError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace scref
