#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#ifdef _WIN32
#include <io.h>
#define TML_ISATTY _isatty
#define TML_FILENO _fileno
#else
#include <unistd.h>
#define TML_ISATTY isatty
#define TML_FILENO fileno
#endif

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include "tml/analyzer.hpp"
#include "tml/cli.hpp"
#include "tml/events.hpp"
#include "tml/format.hpp"
#include "tml/parser.hpp"
#include "tml/render.hpp"

namespace tml {

namespace {

constexpr const char* kVersion = "tm 1.0.0";

bool want_color() {
  const char* setting = std::getenv("TM_COLOR");
  if (setting) {
    std::string value = setting;
    if (value == "always") return true;
    if (value == "never") return false;
  }
  return TML_ISATTY(TML_FILENO(stderr)) != 0;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

void print_diagnostics(std::ostream& err, const std::string& file,
                       const std::vector<Diagnostic>& diags, bool color) {
  for (const Diagnostic& d : diags) {
    err << render_diagnostic(file, d, color) << "\n";
    for (const RelatedNote& note : d.related) {
      err << file;
      if (note.span.valid())
        err << ':' << note.span.line << ':' << note.span.col;
      err << ": note: " << note.message << "\n";
    }
  }
}

nlohmann::ordered_json diagnostics_to_json(
    const std::vector<Diagnostic>& diags) {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const Diagnostic& d : diags) {
    nlohmann::ordered_json item;
    item["line"] = d.span.line;
    item["col"] = d.span.col;
    item["end_line"] = d.span.end_line;
    item["end_col"] = d.span.end_col;
    item["severity"] = d.severity == Severity::Error ? "error" : "warning";
    item["code"] = d.code;
    item["message"] = d.message;
    list.push_back(std::move(item));
  }
  return list;
}

// Full front-half pipeline: lex, parse, resolve, and (when a model exists)
// validate. The model is kept even when validation found errors so callers
// can decide how strict to be.
struct Analysis {
  std::vector<Diagnostic> diagnostics;
  std::optional<StaticModel> model;

  bool clean() const { return !has_errors(diagnostics); }
};

Analysis analyze(const std::string& source, Strictness level,
                 const ValidateOptions& options) {
  Analysis analysis;
  Ast ast = parse(source);
  analysis.diagnostics = ast.diagnostics;
  ResolveResult resolved = resolve(ast);
  analysis.diagnostics.insert(analysis.diagnostics.end(),
                              resolved.diagnostics.begin(),
                              resolved.diagnostics.end());
  if (resolved.model && !has_errors(analysis.diagnostics)) {
    std::vector<Diagnostic> rules = validate(*resolved.model, level, options);
    analysis.diagnostics.insert(analysis.diagnostics.end(), rules.begin(),
                                rules.end());
    analysis.model = std::move(resolved.model);
  }
  sort_diagnostics(analysis.diagnostics);
  return analysis;
}

struct CommonFlags {
  bool lax = false;
  bool connected_regions = false;

  Strictness level() const {
    return lax ? Strictness::Lax : Strictness::Strict;
  }
  ValidateOptions validate_options() const {
    return ValidateOptions{connected_regions};
  }
};

void add_strictness(CLI::App* cmd, CommonFlags& flags) {
  auto* strict = cmd->add_flag("--strict", "treat structural rules as errors"
                                           " (default)");
  auto* lax = cmd->add_flag("--lax", flags.lax,
                            "demote structural rules to warnings");
  strict->excludes(lax);
  lax->excludes(strict);
}

bool write_output(const std::string& path, const std::string& text,
                  std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "tm: error: cannot write '" << path << "'\n";
    return false;
  }
  file << text;
  return true;
}

int run_check(const std::vector<std::string>& files, const CommonFlags& flags,
              bool json, std::ostream& out, std::ostream& err) {
  bool color = want_color();
  bool any_error = false;
  bool any_missing = false;
  nlohmann::ordered_json json_files = nlohmann::ordered_json::array();
  for (const std::string& path : files) {
    std::string source;
    if (!read_file(path, source)) {
      err << "tm: error: cannot read '" << path << "'\n";
      any_missing = true;
      continue;
    }
    Analysis analysis =
        analyze(source, flags.level(), flags.validate_options());
    if (json) {
      nlohmann::ordered_json entry;
      entry["file"] = path;
      entry["diagnostics"] = diagnostics_to_json(analysis.diagnostics);
      entry["errors"] = count_errors(analysis.diagnostics);
      entry["warnings"] = count_warnings(analysis.diagnostics);
      entry["report"] = analysis.model
                            ? report_to_json(summarize(*analysis.model))
                            : nlohmann::ordered_json(nullptr);
      json_files.push_back(std::move(entry));
    } else {
      print_diagnostics(err, path, analysis.diagnostics, color);
    }
    any_error = any_error || !analysis.clean();
  }
  if (json) {
    nlohmann::ordered_json root;
    root["files"] = std::move(json_files);
    out << root.dump(2) << "\n";
  }
  if (any_missing) return 2;
  return any_error ? 1 : 0;
}

int run_events(const std::vector<std::string>& files, const CommonFlags& flags,
               bool json, std::ostream& out, std::ostream& err) {
  bool color = want_color();
  bool any_error = false;
  bool any_missing = false;
  nlohmann::ordered_json json_files = nlohmann::ordered_json::array();
  for (const std::string& path : files) {
    std::string source;
    if (!read_file(path, source)) {
      err << "tm: error: cannot read '" << path << "'\n";
      any_missing = true;
      continue;
    }
    Analysis analysis =
        analyze(source, flags.level(), flags.validate_options());
    print_diagnostics(err, path, analysis.diagnostics, color);
    if (!analysis.clean() || !analysis.model) {
      any_error = true;
      continue;
    }
    const StaticModel& model = *analysis.model;
    PrecedenceRelation relation = infer_dependencies(model);
    if (json) {
      nlohmann::ordered_json events = nlohmann::ordered_json::array();
      for (const EventDef& ev : model.events) {
        Region region = region_of(model, ev);
        nlohmann::ordered_json entry;
        entry["id"] = ev.name;
        entry["label"] = ev.label;
        entry["region_stages"] = region.stages.size();
        entry["region_arcs"] = region.arcs.size();
        nlohmann::ordered_json preds = nlohmann::ordered_json::array();
        for (const EventDef& other : model.events)
          if (relation.contains(other.id, ev.id)) preds.push_back(other.name);
        entry["predecessors"] = std::move(preds);
        events.push_back(std::move(entry));
      }
      nlohmann::ordered_json entry;
      entry["file"] = path;
      entry["events"] = std::move(events);
      json_files.push_back(std::move(entry));
    } else {
      out << path << ": " << model.events.size() << " events\n";
      for (const EventDef& ev : model.events) {
        Region region = region_of(model, ev);
        out << "  " << ev.name;
        if (!ev.label.empty()) out << " \"" << ev.label << "\"";
        out << " region(stages=" << region.stages.size()
            << ", arcs=" << region.arcs.size() << ") after";
        bool first = true;
        for (const EventDef& other : model.events)
          if (relation.contains(other.id, ev.id)) {
            out << (first ? " " : ", ") << other.name;
            first = false;
          }
        if (first) out << " -";
        out << "\n";
      }
    }
  }
  if (json) {
    nlohmann::ordered_json root;
    root["files"] = std::move(json_files);
    out << root.dump(2) << "\n";
  }
  if (any_missing) return 2;
  return any_error ? 1 : 0;
}

int run_behavior(const std::string& path, const CommonFlags& flags,
                 bool acyclic, std::ostream& out, std::ostream& err) {
  bool color = want_color();
  std::string source;
  if (!read_file(path, source)) {
    err << "tm: error: cannot read '" << path << "'\n";
    return 2;
  }
  Analysis analysis = analyze(source, flags.level(), flags.validate_options());
  print_diagnostics(err, path, analysis.diagnostics, color);
  if (!analysis.clean() || !analysis.model) return 1;
  const StaticModel& model = *analysis.model;
  if (!model.behavior) {
    err << "tm: error: " << path << ": no behavior block declared\n";
    return 1;
  }
  std::vector<Diagnostic> chronology =
      validate_behavior(model, BehaviorCheckOptions{acyclic});
  print_diagnostics(err, path, chronology, color);
  LinearizeResult order = linearize(*model.behavior);
  if (!order.ok()) {
    // Avoid repeating a cycle already reported by --acyclic.
    if (!acyclic) print_diagnostics(err, path, order.diagnostics, color);
    return 1;
  }
  for (const std::string& name : order.order) out << name << "\n";
  return has_errors(chronology) ? 1 : 0;
}

int run_render(const std::string& path, const CommonFlags& flags,
               const std::string& mode, const std::string& rankdir,
               const std::string& output, std::ostream& out,
               std::ostream& err) {
  bool color = want_color();
  std::string source;
  if (!read_file(path, source)) {
    err << "tm: error: cannot read '" << path << "'\n";
    return 2;
  }
  Analysis analysis = analyze(source, flags.level(), flags.validate_options());
  print_diagnostics(err, path, analysis.diagnostics, color);
  if (!analysis.clean() || !analysis.model) return 1;
  RenderOptions options;
  options.mode = mode == "dynamic"    ? RenderMode::Dynamic
                 : mode == "behavior" ? RenderMode::Behavior
                                      : RenderMode::Static;
  options.rankdir = rankdir == "TB" ? RankDir::TB : RankDir::LR;
  RenderResult result = render(*analysis.model, options);
  if (!result.ok()) {
    err << "tm: error: " << path << ": " << result.error << "\n";
    return 1;
  }
  return write_output(output, result.dot, out, err) ? 0 : 2;
}

int run_simulate(const std::string& path, const CommonFlags& flags,
                 const std::string& output, std::ostream& out,
                 std::ostream& err) {
  bool color = want_color();
  std::string source;
  if (!read_file(path, source)) {
    err << "tm: error: cannot read '" << path << "'\n";
    return 2;
  }
  Analysis analysis = analyze(source, flags.level(), flags.validate_options());
  print_diagnostics(err, path, analysis.diagnostics, color);
  if (!analysis.clean() || !analysis.model) return 1;
  const StaticModel& model = *analysis.model;
  if (!model.behavior) {
    err << "tm: error: " << path << ": no behavior block declared\n";
    return 1;
  }
  LinearizeResult order = linearize(*model.behavior);
  if (!order.ok()) {
    print_diagnostics(err, path, order.diagnostics, color);
    return 1;
  }
  EventTrace trace = simulate(model, order.order);
  print_diagnostics(err, path, trace.diagnostics, color);
  if (!write_output(output, trace_to_text(trace), out, err)) return 2;
  return has_errors(trace.diagnostics) ? 1 : 0;
}

int run_fmt(const std::vector<std::string>& files, const std::string& output,
            std::ostream& out, std::ostream& err) {
  bool color = want_color();
  if (!output.empty() && files.size() != 1) {
    err << "tm: error: -o requires exactly one input file\n";
    return 2;
  }
  bool any_error = false;
  bool any_missing = false;
  for (const std::string& path : files) {
    std::string source;
    if (!read_file(path, source)) {
      err << "tm: error: cannot read '" << path << "'\n";
      any_missing = true;
      continue;
    }
    Ast ast = parse(source);
    std::optional<std::string> formatted = format(ast);
    if (!formatted) {
      print_diagnostics(err, path, ast.diagnostics, color);
      any_error = true;
      continue;
    }
    if (!output.empty()) {
      if (!write_output(output, *formatted, out, err)) return 2;
    } else if (*formatted != source) {
      if (!write_output(path, *formatted, out, err)) return 2;
    }
  }
  if (any_missing) return 2;
  return any_error ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Analysis toolkit for .tm machine models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  bool json = false;
  bool acyclic = false;
  std::string mode = "static";
  std::string rankdir = "LR";
  std::string output;
  std::vector<std::string> files;
  std::string single_file;

  CLI::App* check = app.add_subcommand(
      "check", "Parse, resolve, and validate models");
  add_strictness(check, flags);
  check->add_flag("--connected-regions", flags.connected_regions,
                  "require every event region to be connected");
  check->add_flag("--json", json, "machine-readable report");
  check->add_option("files", files, "input .tm files")->required();

  CLI::App* events = app.add_subcommand(
      "events", "List events with region sizes and inferred predecessors");
  add_strictness(events, flags);
  events->add_flag("--json", json, "machine-readable report");
  events->add_option("files", files, "input .tm files")->required();

  CLI::App* behavior = app.add_subcommand(
      "behavior", "Check the declared chronology and print it in order");
  add_strictness(behavior, flags);
  behavior->add_flag("--acyclic", acyclic,
                     "treat cycles in the chronology as errors");
  behavior->add_option("file", single_file, "input .tm file")->required();

  CLI::App* render_cmd =
      app.add_subcommand("render", "Emit a DOT drawing of the model");
  add_strictness(render_cmd, flags);
  render_cmd
      ->add_option("--mode", mode, "what to draw (default static)")
      ->check(CLI::IsMember({"static", "dynamic", "behavior"}));
  render_cmd->add_option("--rankdir", rankdir, "layout direction")
      ->check(CLI::IsMember({"LR", "TB"}));
  render_cmd->add_option("-o,--output", output, "write to file ('-' stdout)");
  render_cmd->add_option("file", single_file, "input .tm file")->required();

  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Linearize the chronology and run the token game");
  add_strictness(simulate_cmd, flags);
  simulate_cmd->add_option("-o,--output", output,
                           "write to file ('-' stdout)");
  simulate_cmd->add_option("file", single_file, "input .tm file")->required();

  CLI::App* fmt = app.add_subcommand(
      "fmt", "Rewrite files in canonical form (in place by default)");
  fmt->add_option("-o,--output", output, "write to file ('-' stdout)");
  fmt->add_option("files", files, "input .tm files")->required();

  std::vector<const char*> argv;
  argv.push_back("tm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()),
              const_cast<char**>(argv.data()));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "tm: error: " << e.what() << "\n";
    return 2;
  }

  if (check->parsed()) return run_check(files, flags, json, out, err);
  if (events->parsed()) return run_events(files, flags, json, out, err);
  if (behavior->parsed())
    return run_behavior(single_file, flags, acyclic, out, err);
  if (render_cmd->parsed())
    return run_render(single_file, flags, mode, rankdir, output, out, err);
  if (simulate_cmd->parsed())
    return run_simulate(single_file, flags, output, out, err);
  if (fmt->parsed()) return run_fmt(files, output, out, err);
  err << "tm: error: no subcommand given\n";
  return 2;
}

}  // namespace tml
