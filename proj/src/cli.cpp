#include "workstats/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "workstats/errors.hpp"
#include "workstats/moments.hpp"
#include "workstats/protocols.hpp"
#include "workstats/qubit_scenario.hpp"
#include "workstats/selfcheck.hpp"
#include "workstats/states.hpp"
#include "workstats/table.hpp"

namespace workstats {

namespace {

// Energies are reported in units of the gap and positions in units of
// lambda * gap, so the CLI works with gap = lambda = 1 throughout.
constexpr double kGap = 1.0;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& token, const std::string& what) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw InvalidArgument("cannot parse " + what + " value '" + token + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  return out;
}

// Flat key = value lines; '#' and ';' start comments, [sections] are ignored.
// Each entry becomes "--key value" ahead of the command-line flags, which
// therefore win.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line.substr(0, line.find_first_of("#;")));
    if (t.empty() || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty() || key == "config")
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": invalid key");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  // args[0] is the program name, args[1] the subcommand.
  for (std::size_t n = 2; n < args.size(); ++n) {
    std::string path;
    if (args[n] == "--config" && n + 1 < args.size())
      path = args[n + 1];
    else if (args[n].rfind("--config=", 0) == 0)
      path = args[n].substr(9);
    else
      continue;
    std::vector<std::string> from_file = read_config(path);
    args.insert(args.begin() + 2, from_file.begin(), from_file.end());
    break;
  }
  return args;
}

unsigned thread_budget() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("WORKSTATS_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  const std::string s(env);
  unsigned v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v == 0)
    throw InvalidArgument("WORKSTATS_THREADS must be a positive integer, got '" + s + "'");
  return v;
}

struct OutputOptions {
  std::string out_path;
  std::string format = "csv";
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--out", o.out_path, "Write the table to FILE instead of stdout");
  cmd->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Table& table, const OutputOptions& o, std::ostream& out) {
  const auto write = [&](std::ostream& s) {
    if (o.format == "json")
      write_json(s, table);
    else
      write_csv(s, table);
  };
  if (o.out_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(o.out_path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open output file '" + o.out_path + "'");
  write(file);
}

struct DriveOptions {
  std::string preset = "qubit-fig2";
  std::string axis;
  std::optional<double> delta_angle;
};

void add_drive_options(CLI::App* cmd, DriveOptions& d) {
  cmd->add_option("--preset", d.preset, "Drive preset")
      ->check(CLI::IsMember({"qubit-fig2"}));
  cmd->add_option("--axis", d.axis, "Rotation axis n as 'x,y,z' (renormalized)");
  cmd->add_option("--delta-angle", d.delta_angle, "Rotation angle delta in radians");
}

QubitDrive build_drive(const DriveOptions& d) {
  QubitDrive drive = reference_drive();
  Eigen::Vector3d axis = drive.axis;
  if (!d.axis.empty()) {
    const std::vector<double> n = parse_list(d.axis, "--axis");
    if (n.size() != 3) throw InvalidArgument("--axis needs three comma-separated components");
    axis = {n[0], n[1], n[2]};
  }
  return QubitDrive::make(axis, d.delta_angle.value_or(drive.delta_angle), kGap);
}

struct DistributionOptions {
  std::string protocol = "fcs";
  std::string state = "coherent";
  double beta = 1.0;
  double phi = 0.0;
  double sigma_ratio = 1.0;
  std::size_t points = 4096;
  DriveOptions drive;
  OutputOptions output;
  std::string config;
};

Table distribution_table(const DistributionOptions& o) {
  if (!(o.beta >= 0.0)) throw InvalidArgument("--beta must be >= 0");
  const QubitDrive drive = build_drive(o.drive);
  const HermitianOperatord h = qubit_hamiltonian(drive.gap);
  const UnitaryOperatord v = su2_unitary(drive);
  const SystemState state = o.state == "thermal"
                                ? thermal_state(h, o.beta / drive.gap)
                                : coherent_gibbs_state(h, o.beta / drive.gap,
                                                       Eigen::Vector2d(0.0, o.phi));
  Table table;
  if (o.protocol == "pointer") {
    GridSpec grid;
    grid.points = o.points;
    const GaussianPointer pointer{0.0, o.sigma_ratio * drive.gap, 1.0};
    const PointerDensity dens = pointer_distribution(state, v, h, h, pointer, grid);
    table.columns = {"x", "density", "work_equiv"};
    for (Eigen::Index n = 0; n < dens.grid.size(); ++n)
      table.rows.push_back({format_sci(dens.grid(n)), format_sci(dens.density(n)),
                            format_sci(pointer.work_from_position(dens.grid(n)) / drive.gap)});
    return table;
  }
  const bool tpm = o.protocol == "tpm";
  const WorkAtomDistribution atoms =
      tpm ? tpm_distribution(state, v, h, h) : fcs_quasi_distribution(state, v, h, h);
  table.columns = {"work", tpm ? "probability" : "weight"};
  for (const WorkAtom& a : atoms.atoms())
    table.rows.push_back({format_sci(a.work / drive.gap), format_sci(a.weight)});
  return table;
}

struct SweepOptions {
  std::string figure;
  std::string sweep = "beta";
  std::string protocol = "fcs";
  double beta_min = 0.01;
  double beta_max = 10.0;
  std::size_t beta_points = 200;
  std::string beta_scale = "log";
  std::string phis = "0,1,4";
  double sigma_ratio = 1.0;
  double sigma_min = 0.01;
  double sigma_max = 100.0;
  std::size_t sigma_points = 200;
  double phi = 0.0;
  double beta = 1.0;
  DriveOptions drive;
  OutputOptions output;
  std::string config;
};

std::vector<double> grid_from(double lo, double hi, std::size_t points, const std::string& scale,
                              const std::string& what) {
  if (points == 0) throw InvalidArgument(what + " needs at least one point");
  if (scale == "log") {
    if (!(lo > 0.0) || !(hi >= lo))
      throw InvalidArgument(what + ": a log grid needs 0 < min <= max");
    return log_grid(lo, hi, points);
  }
  if (!(lo >= 0.0) || !(hi >= lo)) throw InvalidArgument(what + ": need 0 <= min <= max");
  return linear_grid(lo, hi, points);
}

Table sweep_table(SweepOptions o, const CLI::App& cmd) {
  const auto given = [&](const char* name) { return cmd.count(name) > 0; };
  enum class Columns { All, ExpWork, MeanWork } columns = Columns::All;
  if (!o.figure.empty()) {
    const bool pointer = o.figure[0] == '3';
    if (o.figure == "3c") {
      o.sweep = "sigma";
    } else {
      o.sweep = "beta";
      if (!given("--protocol")) o.protocol = pointer ? "pointer" : "fcs";
      columns = o.figure[1] == 'a' ? Columns::ExpWork : Columns::MeanWork;
    }
  }
  const QubitDrive drive = build_drive(o.drive);
  const unsigned threads = thread_budget();
  Table table;

  if (o.sweep == "sigma") {
    const std::vector<double> ratios =
        grid_from(o.sigma_min, o.sigma_max, o.sigma_points, "log", "sigma grid");
    if (!(o.beta >= 0.0)) throw InvalidArgument("--beta must be >= 0");
    table.columns = {"sigma_ratio", "work_diff"};
    for (const SigmaSweepRow& r : sweep_sigma(drive, o.phi, o.beta / drive.gap, ratios, threads))
      table.rows.push_back({format_sci(r.sigma_ratio), format_sci(r.work_diff / drive.gap)});
    return table;
  }

  const std::vector<double> phases = parse_list(o.phis, "--phis");
  std::vector<double> betas =
      grid_from(o.beta_min, o.beta_max, o.beta_points, o.beta_scale, "beta grid");
  for (double& b : betas) b /= drive.gap;
  Readout readout = PhaseReadout{};
  if (o.protocol == "pointer") {
    if (!(o.sigma_ratio > 0.0)) throw InvalidArgument("--sigma-ratio must be > 0");
    readout = PointerReadout{o.sigma_ratio};
  }
  const std::vector<BetaSweepRow> rows = sweep_beta(drive, phases, betas, readout, threads);
  switch (columns) {
    case Columns::ExpWork: table.columns = {"beta_delta", "label", "exp_work"}; break;
    case Columns::MeanWork: table.columns = {"beta_delta", "label", "mean_work"}; break;
    case Columns::All:
      table.columns = {"beta_delta", "label", "exp_work", "mean_work", "je_deviation", "bound"};
      break;
  }
  for (const BetaSweepRow& r : rows) {
    std::vector<std::string> cells = {format_sci(r.beta_delta), r.label};
    if (columns != Columns::MeanWork) cells.push_back(format_sci(r.exp_work));
    if (columns != Columns::ExpWork) cells.push_back(format_sci(r.mean_work / drive.gap));
    if (columns == Columns::All) {
      cells.push_back(format_sci(r.je_deviation));
      cells.push_back(format_sci(r.bound));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum work statistics under projective, phase and pointer readouts",
               "workstats"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  DistributionOptions dist;
  CLI::App* dist_cmd = app.add_subcommand("distribution", "Emit one work distribution as a table");
  dist_cmd->add_option("--protocol", dist.protocol, "tpm | fcs | pointer")
      ->check(CLI::IsMember({"tpm", "fcs", "pointer"}));
  dist_cmd->add_option("--state", dist.state, "Initial state")
      ->check(CLI::IsMember({"thermal", "coherent"}));
  dist_cmd->add_option("--beta", dist.beta, "Inverse temperature times the gap");
  dist_cmd->add_option("--phi", dist.phi, "Relative phase of the excited level (coherent state)");
  dist_cmd->add_option("--sigma-ratio", dist.sigma_ratio, "Pointer spread sigma / (lambda Delta)");
  dist_cmd->add_option("--points", dist.points, "Pointer grid points");
  dist_cmd->add_option("--config", dist.config, "key = value file mirroring the flags");
  add_drive_options(dist_cmd, dist.drive);
  add_output_options(dist_cmd, dist.output);

  SweepOptions sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep work averages over beta or sigma");
  sweep_cmd->add_option("--figure", sweep.figure, "Preset sweep")
      ->check(CLI::IsMember({"2a", "2b", "3a", "3b", "3c"}));
  sweep_cmd->add_option("--sweep", sweep.sweep, "Swept parameter")
      ->check(CLI::IsMember({"beta", "sigma"}));
  sweep_cmd->add_option("--protocol", sweep.protocol, "fcs (phase readout) | pointer")
      ->check(CLI::IsMember({"fcs", "pointer"}));
  sweep_cmd->add_option("--beta-min", sweep.beta_min, "Smallest beta * Delta");
  sweep_cmd->add_option("--beta-max", sweep.beta_max, "Largest beta * Delta");
  sweep_cmd->add_option("--beta-points", sweep.beta_points, "Number of beta values");
  sweep_cmd->add_option("--beta-scale", sweep.beta_scale, "Grid spacing")
      ->check(CLI::IsMember({"log", "linear"}));
  sweep_cmd->add_option("--phis", sweep.phis, "Comma-separated phases; empty for thermal only");
  sweep_cmd->add_option("--sigma-ratio", sweep.sigma_ratio, "Pointer spread sigma / (lambda Delta)");
  sweep_cmd->add_option("--sigma-min", sweep.sigma_min, "Smallest sigma / (lambda Delta)");
  sweep_cmd->add_option("--sigma-max", sweep.sigma_max, "Largest sigma / (lambda Delta)");
  sweep_cmd->add_option("--sigma-points", sweep.sigma_points, "Number of sigma values");
  sweep_cmd->add_option("--phi", sweep.phi, "Phase of the coherent state in a sigma sweep");
  sweep_cmd->add_option("--beta", sweep.beta, "beta * Delta in a sigma sweep");
  sweep_cmd->add_option("--config", sweep.config, "key = value file mirroring the flags");
  add_drive_options(sweep_cmd, sweep.drive);
  add_output_options(sweep_cmd, sweep.output);

  std::uint64_t seed = 42;
  int trials = 50;
  CLI::App* check_cmd = app.add_subcommand("selfcheck", "Run the randomized oracle cross-checks");
  check_cmd->add_option("--seed", seed, "Random seed");
  check_cmd->add_option("--trials", trials, "Random systems per check")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> ptrs;
    for (const std::string& a : args) ptrs.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    if (dist_cmd->parsed()) {
      emit(distribution_table(dist), dist.output, out);
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      emit(sweep_table(sweep, *sweep_cmd), sweep.output, out);
      return kExitOk;
    }
    const std::vector<CheckResult> results = run_selfcheck(seed, trials);
    write_selfcheck_report(out, results);
    return all_passed(results) ? kExitOk : kExitCheckFailed;
  } catch (const InvalidArgument& e) {
    err << "workstats: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "workstats: " << e.what() << '\n';
    return kExitNumerical;
  }
}

} // namespace workstats
