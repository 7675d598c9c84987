#include "seisreg/config.hpp"

#include <charconv>
#include <sstream>

#include "seisreg/error.hpp"
#include "seisreg/formats.hpp"

namespace seisreg {

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

std::string num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::ConfigError, "key '" + key + "': '" + value + "' is not a valid number");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::ConfigError, "key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    apply_override(kv, line);
  }
  return kv;
}

void apply_override(KeyValues& kv, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::ConfigError, "expected key = value, got '" + std::string(assignment) + "'");
  }
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw Error(ErrorKind::ConfigError, "empty key in '" + std::string(assignment) + "'");
  kv[key] = trim(assignment.substr(eq + 1));
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string_view to_string(RegMethod m) {
  switch (m) {
    case RegMethod::none: return "none";
    case RegMethod::avg9: return "avg9";
    case RegMethod::ft: return "ft";
    case RegMethod::wd: return "wd";
    case RegMethod::emd: return "emd";
  }
  return "none";
}

RegMethod reg_method_from_string(std::string_view s) {
  for (RegMethod m : {RegMethod::none, RegMethod::avg9, RegMethod::ft, RegMethod::wd, RegMethod::emd}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorKind::ConfigError,
              "unknown method '" + std::string(s) + "' (expected none, avg9, ft, wd, emd)");
}

std::filesystem::path RunConfig::resolve(const std::string& p) const {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::ConfigError, m); };
  if (volumes.empty()) bad("no predictor volumes configured (key 'volumes')");
  if (logs.empty()) bad("no well logs configured (key 'logs')");
  if (logs.size() != velocities.size()) bad("'logs' and 'velocities' must list the same number of files");
  if (!(log_dt_ms > 0.0)) bad("log_dt_ms must be positive");
  if (hidden == 0) bad("mlp.hidden must be >= 1");
  if (max_attempts < 1) bad("retrain.max_attempts must be >= 1");
  if (mi_bins < 2) bad("mi.bins must be >= 2");
  if (median_window < 1 || median_window % 2 == 0) bad("predict.median_window must be odd");
  if (avg_span < 1 || avg_span % 2 == 0) {
    throw Error(ErrorKind::SpanTooLarge, "avg.span must be odd and >= 1");
  }
  scg.validate();
  sift.validate();
  for (const auto& group : {volumes, logs, velocities}) {
    for (const auto& f : group) {
      if (!std::filesystem::exists(resolve(f))) bad("file not found: " + resolve(f).string());
    }
  }
}

RunConfig run_config_from(const KeyValues& kv, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  for (const auto& [key, value] : kv) {
    if (key == "volumes") c.volumes = split_list(value);
    else if (key == "logs") c.logs = split_list(value);
    else if (key == "velocities") c.velocities = split_list(value);
    else if (key == "target_curve") c.target_curve = value;
    else if (key == "log_dt_ms") c.log_dt_ms = parse_number<double>(key, value);
    else if (key == "method") c.method = reg_method_from_string(value);
    else if (key == "avg.span") c.avg_span = parse_number<int>(key, value);
    else if (key == "ft.zeta_max_hz") c.ft_zeta_max_hz = parse_number<double>(key, value);
    else if (key == "wd.wavelet") c.wd.wavelet = value;
    else if (key == "wd.levels") c.wd.levels = parse_number<int>(key, value);
    else if (key == "wd.truncate") {
      c.wd.truncate_details.clear();
      for (const auto& t : split_list(value)) c.wd.truncate_details.push_back(parse_number<int>(key, t));
    }
    else if (key == "wd.mode") c.wd.mode = boundary_mode_from_string(value);
    else if (key == "emd.p1") c.emd_p1 = parse_number<int>(key, value);
    else if (key == "emd.sd_threshold") c.sift.sd_threshold = parse_number<double>(key, value);
    else if (key == "emd.max_sift_iters") c.sift.max_sift_iters = parse_number<int>(key, value);
    else if (key == "emd.max_imfs") c.sift.max_imfs = parse_number<int>(key, value);
    else if (key == "gate.tolerance") c.gate_tolerance = parse_number<double>(key, value);
    else if (key == "mi.bins") c.mi_bins = parse_number<int>(key, value);
    else if (key == "split.seed") c.split_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "mlp.hidden") c.hidden = parse_number<std::size_t>(key, value);
    else if (key == "mlp.seed") c.mlp_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "scg.max_iters") c.scg.max_iters = parse_number<int>(key, value);
    else if (key == "scg.target_loss") c.scg.target_loss = parse_number<double>(key, value);
    else if (key == "scg.sigma") c.scg.sigma = parse_number<double>(key, value);
    else if (key == "scg.lambda1") c.scg.lambda1 = parse_number<double>(key, value);
    else if (key == "retrain.cc_threshold") c.cc_threshold = parse_number<double>(key, value);
    else if (key == "retrain.max_attempts") c.max_attempts = parse_number<int>(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "predict.volume") c.predict_volume = parse_bool(key, value);
    else if (key == "predict.median_window") c.median_window = parse_number<int>(key, value);
    else if (key == "predict.slice_inline") c.slice_inline = parse_number<std::int32_t>(key, value);
    else throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "'");
  }
  // a level count without an explicit truncation list gets the default list for that count
  if (kv.contains("wd.levels") && !kv.contains("wd.truncate")) {
    c.wd.truncate_details = WdParams::default_truncation(c.wd.levels);
  }
  c.wd.entropy_tolerance = c.gate_tolerance;
  return c;
}

KeyValues resolved_key_values(const RunConfig& c) {
  KeyValues kv;
  kv["volumes"] = join(c.volumes);
  kv["logs"] = join(c.logs);
  kv["velocities"] = join(c.velocities);
  kv["target_curve"] = c.target_curve;
  kv["log_dt_ms"] = num(c.log_dt_ms);
  kv["method"] = std::string(to_string(c.method));
  kv["avg.span"] = std::to_string(c.avg_span);
  kv["ft.zeta_max_hz"] = num(c.ft_zeta_max_hz);
  kv["wd.wavelet"] = c.wd.wavelet;
  kv["wd.levels"] = std::to_string(c.wd.levels);
  std::vector<std::string> trunc;
  for (int t : c.wd.truncate_details) trunc.push_back(std::to_string(t));
  kv["wd.truncate"] = join(trunc);
  kv["wd.mode"] = std::string(to_string(c.wd.mode));
  kv["emd.p1"] = std::to_string(c.emd_p1);
  kv["emd.sd_threshold"] = num(c.sift.sd_threshold);
  kv["emd.max_sift_iters"] = std::to_string(c.sift.max_sift_iters);
  kv["emd.max_imfs"] = std::to_string(c.sift.max_imfs);
  kv["gate.tolerance"] = num(c.gate_tolerance);
  kv["mi.bins"] = std::to_string(c.mi_bins);
  kv["split.seed"] = std::to_string(c.split_seed);
  kv["mlp.hidden"] = std::to_string(c.hidden);
  kv["mlp.seed"] = std::to_string(c.mlp_seed);
  kv["scg.max_iters"] = std::to_string(c.scg.max_iters);
  kv["scg.target_loss"] = num(c.scg.target_loss);
  kv["scg.sigma"] = num(c.scg.sigma);
  kv["scg.lambda1"] = num(c.scg.lambda1);
  kv["retrain.cc_threshold"] = num(c.cc_threshold);
  kv["retrain.max_attempts"] = std::to_string(c.max_attempts);
  kv["out_dir"] = c.out_dir;
  kv["predict.volume"] = c.predict_volume ? "true" : "false";
  kv["predict.median_window"] = std::to_string(c.median_window);
  kv["predict.slice_inline"] = std::to_string(c.slice_inline);
  return kv;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  KeyValues kv = parse_key_values(read_file_text(path));
  for (const auto& o : overrides) apply_override(kv, o);
  return run_config_from(kv, path.parent_path());
}

}  // namespace seisreg
