#include "run_config.hpp"

#include "ewr/diagnostics.hpp"
#include "ewr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace ewr::app {

namespace {

struct Entry {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ", ") + format_double(x);
  return out;
}

std::vector<double> split(const std::string& text, const std::string& key) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, key));
  return out;
}

long long parse_int(const std::string& text, const std::string& key) {
  const double v = parse_double(text, key);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + text + "'");
}

template <class Get>
Entry real_ref(const std::string& key, Get ref) {
  return {key, [=](const RunConfig& c) { return format_double(ref(c)); },
          [=](RunConfig& c, const std::string& v) { ref(c) = parse_double(v, key); }};
}

template <class T, class Get>
Entry integer_ref(const std::string& key, Get ref) {
  return {key, [=](const RunConfig& c) { return std::to_string(ref(c)); },
          [=](RunConfig& c, const std::string& v) {
            const long long x = parse_int(v, key);
            if (x < 0 && std::is_unsigned_v<T>) throw ConfigError(key + ": must be >= 0");
            ref(c) = static_cast<T>(x);
          }};
}

template <class Get>
Entry list_ref(const std::string& key, Get ref) {
  return {key, [=](const RunConfig& c) { return join(ref(c)); },
          [=](RunConfig& c, const std::string& v) { ref(c) = split(v, key); }};
}

template <class Get>
Entry flag_ref(const std::string& key, Get ref) {
  return {key, [=](const RunConfig& c) { return std::string(ref(c) ? "true" : "false"); },
          [=](RunConfig& c, const std::string& v) { ref(c) = parse_bool(v, key); }};
}

// Works for both const and mutable configs.
#define EWR_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Entry>& table() {
  static const std::vector<Entry> entries = {
      real_ref("optics.lambda_nm", EWR_REF(optics.lambda_nm)),
      real_ref("optics.cs_nm", EWR_REF(optics.cs_nm)),
      real_ref("optics.alpha_max_rad", EWR_REF(optics.alpha_max_rad)),
      real_ref("optics.delta_nm", EWR_REF(optics.delta_nm)),
      real_ref("optics.alpha_conv_rad", EWR_REF(optics.alpha_conv_rad)),

      integer_ref<std::size_t>("grid.n", EWR_REF(grid.n)),
      real_ref("grid.extent_nm", EWR_REF(grid.extent_nm)),
      integer_ref<int>("grid.oversample", EWR_REF(oversample)),
      integer_ref<int>("grid.n_focal", EWR_REF(n_focal)),

      {"wave.kind", [](const RunConfig& c) { return c.wave_kind; },
       [](RunConfig& c, const std::string& v) { c.wave_kind = v; }},
      real_ref("wave.cell_nm", EWR_REF(cell_nm)),

      real_ref("series.focus_start_nm", EWR_REF(focus_start_nm)),
      real_ref("series.focus_step_nm", EWR_REF(focus_step_nm)),
      integer_ref<int>("series.count", EWR_REF(count)),
      list_ref("series.foci_nm", EWR_REF(foci_nm)),
      real_ref("series.drift_x_nm", EWR_REF(drift_step_nm.x)),
      real_ref("series.drift_y_nm", EWR_REF(drift_step_nm.y)),
      real_ref("series.poisson_dose", EWR_REF(poisson_dose)),

      real_ref("solver.alpha", EWR_REF(solver.alpha)),
      real_ref("solver.epsilon_stop", EWR_REF(solver.epsilon_stop)),
      integer_ref<int>("solver.max_iters", EWR_REF(solver.max_iters)),
      real_ref("solver.armijo_sigma", EWR_REF(solver.armijo_sigma)),
      real_ref("solver.armijo_backtrack", EWR_REF(solver.armijo_backtrack)),
      real_ref("solver.armijo_initial_step", EWR_REF(solver.armijo_initial_step)),
      integer_ref<int>("solver.armijo_max_backtracks", EWR_REF(solver.armijo_max_backtracks)),
      integer_ref<int>("solver.restart_period", EWR_REF(solver.restart_period)),
      real_ref("solver.translation_bound_nm", EWR_REF(solver.translation_bound_nm)),
      real_ref("solver.translation_scale_nm", EWR_REF(solver.translation_scale_nm)),
      flag_ref("solver.freeze_translations", EWR_REF(solver.freeze_translations)),
      flag_ref("solver.exact_line_search", EWR_REF(solver.exact_line_search)),

      integer_ref<std::uint64_t>("run.seed", EWR_REF(seed)),
      {"run.output_dir", [](const RunConfig& c) { return c.output_dir.string(); },
       [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      integer_ref<unsigned>("run.threads", EWR_REF(threads)),
      flag_ref("run.deterministic", EWR_REF(deterministic)),

      list_ref("probe.widths", EWR_REF(probe.widths)),
      real_ref("probe.convexity_rel_tol", EWR_REF(probe.convexity_rel_tol)),
      list_ref("probe.deltas", EWR_REF(probe.deltas)),
      real_ref("probe.focus_nm", EWR_REF(probe.focus_nm)),
      list_ref("probe.node_counts", EWR_REF(probe.node_counts)),
      integer_ref<int>("probe.radial_samples", EWR_REF(probe.radial_samples)),
      list_ref("probe.oracle_ms", EWR_REF(probe.oracle_ms)),
      integer_ref<int>("probe.oracle_pairs", EWR_REF(probe.oracle_pairs)),
      real_ref("probe.oracle_sigma_u", EWR_REF(probe.oracle_sigma_u)),
      real_ref("probe.oracle_sigma_f", EWR_REF(probe.oracle_sigma_f)),
      integer_ref<int>("probe.invariance_count", EWR_REF(probe.invariance_count)),
      real_ref("probe.invariance_tol", EWR_REF(probe.invariance_tol)),
  };
  return entries;
}

#undef EWR_REF

const Entry& entry(const std::string& key) {
  for (const auto& e : table())
    if (e.key == key) return e;
  throw ConfigError("unknown config key '" + key + "'");
}

void collect(const boost::property_tree::ptree& tree, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [name, child] : tree) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (child.empty())
      out.emplace_back(key, child.data());
    else
      collect(child, key, out);
  }
}

bool integral_list(const std::vector<double>& v, int lo) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == std::floor(x) && x >= lo && x < 1e6; });
}

}  // namespace

void RunConfig::apply(const KeyValueFile& kv) {
  std::vector<std::pair<std::string, std::string>> pairs;
  collect(kv.tree(), "", pairs);
  for (const auto& [key, value] : pairs) entry(key).set(*this, value);
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  entry(trim(assignment.substr(0, eq))).set(*this, trim(assignment.substr(eq + 1)));
}

void RunConfig::validate() const {
  try {
    optics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (grid.n < 2 || (grid.n & (grid.n - 1)) != 0) throw ConfigError("grid.n must be a power of two");
  if (!(grid.extent_nm > 0.0) || !std::isfinite(grid.extent_nm)) throw ConfigError("grid.extent_nm must be > 0");
  if (oversample < 1 || (oversample & (oversample - 1)) != 0)
    throw ConfigError("grid.oversample must be a power of two >= 1");
  if (n_focal < 1 || n_focal % 2 == 0) throw ConfigError("grid.n_focal must be odd and >= 1");
  if (count < 1) throw ConfigError("series.count must be >= 1");
  if (!foci_nm.empty() && foci_nm.size() != static_cast<std::size_t>(count))
    throw ConfigError("series.foci_nm must list series.count values");
  if (!(poisson_dose >= 0.0)) throw ConfigError("series.poisson_dose must be >= 0");
  if (wave_kind != "perovskite" && wave_kind != "plane" && wave_kind != "random")
    throw ConfigError("wave.kind must be perovskite, plane or random");
  if (wave_kind == "random" && oversample != 1) throw ConfigError("wave.kind = random needs grid.oversample = 1");
  if (wave_kind == "perovskite") {
    if (!(cell_nm > 0.0)) throw ConfigError("wave.cell_nm must be > 0");
    const double px = cell_nm / grid.pixel_size();
    if (std::abs(px - std::round(px)) > 1e-9) throw ConfigError("wave.cell_nm must span a whole number of pixels");
    const double fit = oversample * grid.extent_nm / cell_nm;
    if (std::abs(fit - std::round(fit)) > 1e-9)
      throw ConfigError("wave.cell_nm must tile the simulation grid");
  }
  solver.validate();
  if (probe.widths.empty() || probe.deltas.empty() || probe.node_counts.empty() || probe.oracle_ms.empty())
    throw ConfigError("probe sweeps must not be empty");
  if (!integral_list(probe.node_counts, 1) || !integral_list(probe.oracle_ms, 1))
    throw ConfigError("probe.node_counts and probe.oracle_ms must be positive integers");
  if (probe.radial_samples < 2 || probe.oracle_pairs < 1 || probe.invariance_count < 1)
    throw ConfigError("probe sample counts must be positive");
}

KeyValueFile RunConfig::to_kv() const {
  KeyValueFile kv;
  for (const auto& e : table()) kv.set(e.key, e.get(*this));
  return kv;
}

std::vector<double> RunConfig::foci() const {
  return foci_nm.empty() ? focus_ramp(focus_start_nm, focus_step_nm, static_cast<std::size_t>(count)) : foci_nm;
}

std::vector<Vec2> RunConfig::drifts() const { return drift_ramp(drift_step_nm, static_cast<std::size_t>(count)); }

GridSpec RunConfig::simulation_grid() const {
  return {grid.n * static_cast<std::size_t>(oversample), grid.extent_nm * oversample};
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  RunConfig c;
  c.apply(KeyValueFile::load(path));
  return c;
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& e : table()) out.push_back(e.key);
  return out;
}

}  // namespace ewr::app
