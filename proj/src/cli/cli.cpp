#include "valtrace/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "valtrace/assessment/assessment.hpp"
#include "valtrace/frontend/lexer.hpp"
#include "valtrace/frontend/parser.hpp"
#include "valtrace/plagiarism/plagiarism.hpp"
#include "valtrace/reference/reference.hpp"
#include "valtrace/vm/profile.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {

namespace fs = std::filesystem;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CliError(path + ": read failed");
  return ss.str();
}

InstrumentedProgram load_program(const std::string& path) {
  const std::string source = read_file(path);
  try {
    return rewrite(parse_source(source));
  } catch (const LexError& e) {
    throw CliError(path + ":" + e.what());
  } catch (const ParseError& e) {
    throw CliError(path + ":" + e.what());
  }
}

Reference load_reference(const std::string& path) {
  const std::string bytes = read_file(path);
  try {
    return deserialize(bytes);
  } catch (const std::exception& e) {
    throw CliError(path + ": " + e.what());
  }
}

ExecutionLimits limits_for(std::uint64_t max_steps) {
  ExecutionLimits limits;
  limits.max_steps = max_steps;
  limits.validate();
  return limits;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || item[0] == '-') {
      throw CliError("--sizes: '" + item + "' is not a non-negative integer");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.empty()) throw CliError("--sizes: at least one size is required");
  return sizes;
}

struct Options {
  std::string reference_source, driver, out_path, name;
  std::string student, format = "text";
  std::vector<std::string> references;
  std::uint64_t max_steps = ExecutionLimits{}.max_steps;
  std::string entry, sizes, generator = "ascending";
  std::uint64_t seed = 0;
  std::string dir;
  bool captures = false;
};

int cmd_compile(const Options& o, std::ostream& out) {
  const InstrumentedProgram instructor = load_program(o.reference_source);
  const InstrumentedProgram driver = load_program(o.driver);
  const std::string name = o.name.empty() ? fs::path(o.reference_source).stem().string() : o.name;
  Reference ref;
  try {
    ref = build_reference(instructor, driver, name, limits_for(o.max_steps));
  } catch (const std::exception& e) {
    throw CliError(o.reference_source + ": " + e.what());
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw CliError(o.out_path + ": cannot write file");
  file << serialize(ref);
  if (!file.flush()) throw CliError(o.out_path + ": write failed");
  out << "compiled " << ref.annotations.size() << " annotation"
      << (ref.annotations.size() == 1 ? "" : "s") << " to " << o.out_path << '\n';
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  std::vector<Reference> refs;
  for (const auto& path : o.references) refs.push_back(load_reference(path));
  const InstrumentedProgram student = load_program(o.student);
  const InstrumentedProgram driver = load_program(o.driver);
  const AssessmentReport report = check(refs, student, driver, limits_for(o.max_steps));
  out << (o.format == "json" ? render_json(report) : render_text(report));
  return report.results[report.best].satisfied ? kExitOk : kExitUnsatisfied;
}

int cmd_trace(const Options& o, std::ostream& out, std::ostream& err) {
  const InstrumentedProgram student = load_program(o.student);
  const InstrumentedProgram driver = load_program(o.driver);
  if (o.captures) {
    for (const auto& [program, offset] :
         {std::pair{&student, kStudentCaptureOffset}, std::pair{&driver, 0}}) {
      for (const auto& p : program->capture_points) {
        out << "# " << p.id + offset << '\t' << to_string(p.kind) << '\t'
            << to_string(p.origin) << '\n';
      }
    }
  }
  const Footprint fp = execute(student, driver, limits_for(o.max_steps));
  out << dump_footprint(fp);
  if (fp.outcome.kind != OutcomeKind::Completed) {
    err << describe_outcome(fp.outcome) << '\n';
    return kExitUnsatisfied;
  }
  return kExitOk;
}

int cmd_profile(const Options& o, std::ostream& out, std::ostream& err) {
  const auto generator = parse_generator(o.generator);
  if (!generator) throw CliError("--generator: unknown generator '" + o.generator + "'");
  const auto sizes = parse_sizes(o.sizes);
  const InstrumentedProgram student = load_program(o.student);
  const auto rows = profile(student, o.entry, sizes, *generator, o.seed, limits_for(o.max_steps));
  bool errored = false;
  for (const auto& row : rows) {
    out << row.size << '\t' << row.steps << '\n';
    if (row.error) {
      errored = true;
      err << "size " << row.size << ": " << *row.error << '\n';
    }
  }
  return errored ? kExitUnsatisfied : kExitOk;
}

int cmd_similarity(const Options& o, std::ostream& out) {
  std::error_code ec;
  if (!fs::is_directory(o.dir, ec)) throw CliError(o.dir + ": not a directory");
  const fs::path driver_path = fs::weakly_canonical(o.driver, ec);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".sl") continue;
    if (fs::weakly_canonical(entry.path(), ec) == driver_path) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw CliError(o.dir + ": at least 2 .sl submissions are required");

  const InstrumentedProgram driver = load_program(o.driver);
  std::vector<Submission> submissions;
  for (const auto& f : files) {
    submissions.push_back(Submission{f.stem().string(), load_program(f.string())});
  }
  const auto footprints = run_cohort(submissions, driver, limits_for(o.max_steps));
  const CohortIndex index = build_index(submissions, footprints);
  const SimilarityMatrix m = index.similarity_matrix();

  if (o.format == "json") {
    out << "{\"ids\":[";
    for (std::size_t i = 0; i < submissions.size(); ++i) {
      out << (i ? "," : "") << '"' << submissions[i].id << '"';
    }
    out << "],\"matrix\":[";
    for (std::size_t i = 0; i < m.size(); ++i) {
      out << (i ? "," : "") << '[';
      for (std::size_t j = 0; j < m.size(); ++j) out << (j ? "," : "") << fixed6(m[i][j]);
      out << ']';
    }
    out << "]}\n";
    return kExitOk;
  }
  out << "id";
  for (const auto& s : submissions) out << ',' << s.id;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << submissions[i].id;
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << fixed6(m[i][j]);
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-based assessment for SL programs"};
  app.require_subcommand(1);
  Options o;

  auto add_steps = [&](CLI::App* cmd) {
    cmd->add_option("--max-steps", o.max_steps, "Step limit for each execution")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* compile = app.add_subcommand("compile", "Build a reference file from an annotated program");
  compile->add_option("reference", o.reference_source, "Annotated reference program (.sl)")->required();
  compile->add_option("driver", o.driver, "Driver program (.sl)")->required();
  compile->add_option("out", o.out_path, "Output reference file (.ref.json)")->required();
  compile->add_option("--name", o.name, "Reference name (default: file stem)");
  add_steps(compile);

  CLI::App* check_cmd = app.add_subcommand("check", "Assess a submission against references");
  check_cmd->add_option("student", o.student, "Submission (.sl)")->required();
  check_cmd->add_option("driver", o.driver, "Driver program (.sl)")->required();
  check_cmd->add_option("references", o.references, "Reference files (.ref.json)")->required();
  check_cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  add_steps(check_cmd);

  CLI::App* trace = app.add_subcommand("trace", "Dump the footprint of a run");
  trace->add_option("student", o.student, "Submission (.sl)")->required();
  trace->add_option("driver", o.driver, "Driver program (.sl)")->required();
  trace->add_flag("--captures", o.captures, "Also list capture points");
  add_steps(trace);

  CLI::App* prof = app.add_subcommand("profile", "Count steps over input sizes");
  prof->add_option("student", o.student, "Submission (.sl)")->required();
  prof->add_option("--entry", o.entry, "Function taking one list argument")->required();
  prof->add_option("--sizes", o.sizes, "Comma-separated input sizes")->required();
  prof->add_option("--generator", o.generator, "ascending, descending or uniform");
  prof->add_option("--seed", o.seed, "Seed for the uniform generator");
  add_steps(prof);

  CLI::App* sim = app.add_subcommand("similarity", "Score pairwise similarity across a cohort");
  sim->add_option("dir", o.dir, "Directory of .sl submissions")->required();
  sim->add_option("driver", o.driver, "Shared driver program (.sl)")->required();
  sim->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  add_steps(sim);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (compile->parsed()) return cmd_compile(o, out);
    if (check_cmd->parsed()) return cmd_check(o, out);
    if (trace->parsed()) return cmd_trace(o, out, err);
    if (prof->parsed()) return cmd_profile(o, out, err);
    if (sim->parsed()) {
      if (o.format == "text") o.format = "csv";
      return cmd_similarity(o, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace valtrace
