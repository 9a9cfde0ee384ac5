#include "cpofdm/config.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "json.hpp"

namespace cpofdm {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultTargetCell = 40;

struct Experiments {
  Experiment value;
  std::string_view name;
};
constexpr Experiments kExperiments[] = {
    {Experiment::profile, "profile"},
    {Experiment::compare_baselines, "compare_baselines"},
    {Experiment::doppler_sweep, "doppler_sweep"},
    {Experiment::pointing_sweep, "pointing_sweep"},
    {Experiment::periodicity, "periodicity"},
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

// Offset of element `wanted` of the array whose '[' sits at `open`.
std::optional<std::size_t> array_element(std::string_view text, std::size_t open,
                                         std::size_t wanted) {
  std::size_t element = 0;
  bool expecting_start = true;
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open + 1; i < text.size(); ++i) {
    const char c = text[i];
    if (expecting_start && depth == 0 && !is_space(c)) {
      if (c == ']') return std::nullopt;
      if (element == wanted) return i;
      expecting_start = false;
    }
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      ++depth;
    } else if (c == ']' || c == '}') {
      if (depth == 0) return std::nullopt;
      --depth;
    } else if (c == ',' && depth == 0) {
      ++element;
      expecting_start = true;
    }
  }
  return std::nullopt;
}

// Best-effort source offset of a JSON pointer: each object key is searched
// forward from the previous match, array indices count top-level elements.
std::optional<std::size_t> locate(std::string_view text, std::string_view pointer) {
  std::size_t pos = 0;
  std::size_t start = 1;
  while (start <= pointer.size()) {
    std::size_t end = pointer.find('/', start);
    if (end == std::string_view::npos) end = pointer.size();
    const std::string_view segment = pointer.substr(start, end - start);
    start = end + 1;

    std::size_t probe = pos;
    while (probe < text.size() && (is_space(text[probe]) || text[probe] == ':')) ++probe;
    const bool is_index = !segment.empty() &&
                          segment.find_first_not_of("0123456789") == std::string_view::npos;
    if (is_index && probe < text.size() && text[probe] == '[') {
      const auto at = array_element(text, probe, std::stoul(std::string(segment)));
      if (!at) return std::nullopt;
      pos = *at;
      continue;
    }

    const std::string needle = "\"" + std::string(segment) + "\"";
    std::size_t found = text.find(needle, pos);
    while (found != std::string_view::npos) {
      std::size_t after = found + needle.size();
      while (after < text.size() && is_space(text[after])) ++after;
      if (after < text.size() && text[after] == ':') break;
      found = text.find(needle, found + 1);
    }
    if (found == std::string_view::npos) return std::nullopt;
    if (start > pointer.size()) return found;
    pos = found + needle.size();
  }
  return pointer.empty() ? std::optional<std::size_t>(0) : std::optional<std::size_t>(pos);
}

class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& diagnostics) : diagnostics_(diagnostics) {}

  void error(std::string path, std::string message) {
    diagnostics_.push_back({std::move(path), 0, 0, std::move(message)});
  }

  const json* object(const json& parent, const char* key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& v = parent.at(key);
    if (!v.is_object()) {
      error(path + "/" + key, "expected an object");
      return nullptr;
    }
    return &v;
  }

  void number(const json& parent, const char* key, const std::string& path, double& out) {
    if (!parent.contains(key)) return;
    const json& v = parent.at(key);
    if (!v.is_number()) {
      error(path + "/" + key, "expected a number");
      return;
    }
    out = v.get<double>();
  }

  void count(const json& parent, const char* key, const std::string& path, std::size_t& out) {
    if (!parent.contains(key)) return;
    const json& v = parent.at(key);
    if (!v.is_number_unsigned()) {
      error(path + "/" + key, "expected a non-negative integer");
      return;
    }
    out = v.get<std::size_t>();
  }

  template <typename T, typename F>
  bool array(const json& parent, const char* key, const std::string& path, std::vector<T>& out,
             F&& element) {
    if (!parent.contains(key)) return false;
    const json& v = parent.at(key);
    if (!v.is_array()) {
      error(path + "/" + key, "expected an array");
      return false;
    }
    std::vector<T> values;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      T value{};
      if (element(v[i], path + "/" + key + "/" + std::to_string(i), value)) {
        values.push_back(value);
      } else {
        ok = false;
      }
    }
    if (ok) out = std::move(values);
    return ok;
  }

  bool number_element(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) {
      error(path, "expected a number");
      return false;
    }
    out = v.get<double>();
    return true;
  }

  bool count_element(const json& v, const std::string& path, std::size_t& out) {
    if (!v.is_number_unsigned()) {
      error(path, "expected a non-negative integer");
      return false;
    }
    out = v.get<std::size_t>();
    return true;
  }

  void reject_unknown(const json& object, const std::string& path,
                      std::initializer_list<std::string_view> known) {
    for (const auto& item : object.items()) {
      bool ok = false;
      for (auto k : known) ok = ok || item.key() == k;
      if (!ok) error(path + "/" + item.key(), "unknown field '" + item.key() + "'");
    }
  }

 private:
  std::vector<Diagnostic>& diagnostics_;
};

bool valid_angle_deg(double deg) { return std::isfinite(deg) && std::abs(deg) < 90.0; }

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& x : kExperiments) {
    if (x.value == e) return x.name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& x : kExperiments) {
    if (x.name == name) return x.value;
  }
  return std::nullopt;
}

std::string Diagnostic::format(std::string_view file) const {
  std::string out(file);
  if (line > 0) out += ":" + std::to_string(line) + ":" + std::to_string(column);
  out += ": ";
  if (!path.empty()) out += path + ": ";
  return out + message;
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.params = RadarParams{3.0e9, 50.0e6, 512, 4, 4};
  cfg.waveform = WaveformConfig::with_default_roots(512, 4, 61);
  cfg.array = ArrayGeometry::half_wavelength_ula(cfg.params);
  cfg.scene.h.assign(61, cplx{});
  cfg.scene.h[kDefaultTargetCell] = 1.0;
  cfg.scene.dod = deg_to_rad(30.0);
  cfg.scene.doa = deg_to_rad(20.0);
  cfg.pointing = {cfg.scene.dod, cfg.scene.doa};
  cfg.canonical = canonical_json(cfg);
  return cfg;
}

std::vector<Diagnostic> validate(const RunConfig& cfg) {
  std::vector<Diagnostic> out;
  auto add = [&out](std::string path, std::string message) {
    out.push_back({std::move(path), 0, 0, std::move(message)});
  };
  const auto& p = cfg.params;
  if (!(p.carrier_hz > 0.0) || !std::isfinite(p.carrier_hz)) {
    add("/params/carrier_hz", "carrier frequency must be > 0");
  }
  if (!(p.bandwidth_hz > 0.0) || !std::isfinite(p.bandwidth_hz)) {
    add("/params/bandwidth_hz", "bandwidth must be > 0");
  }
  if (p.n_tx < 1) add("/params/n_tx", "transmit antenna count M must be >= 1");
  if (p.n_rx < 1) add("/params/n_rx", "receive antenna count Q must be >= 1");
  if (p.n_subcarriers < p.n_tx) add("/params/n_subcarriers", "subcarrier count N must be >= M");

  const auto& w = cfg.waveform;
  if (w.n_subcarriers != p.n_subcarriers || w.n_tx != p.n_tx) {
    add("/waveform", "waveform dimensions disagree with params");
  }
  const bool divisible = p.n_tx >= 1 && p.n_subcarriers % p.n_tx == 0;
  if (p.n_tx >= 1 && !divisible) {
    add("/params/n_subcarriers", "N must be multiple of M (N=" + std::to_string(p.n_subcarriers) +
                                     ", M=" + std::to_string(p.n_tx) + ")");
  }
  const std::size_t n0 = divisible ? p.n_subcarriers / p.n_tx : 0;
  if (divisible && n0 < 2) add("/params/n_subcarriers", "N0 = N/M must be >= 2");
  if (w.n_cells < 1) add("/waveform/n_cells", "tracking zone L must be >= 1");
  if (divisible && n0 >= 2 && w.n_cells >= n0) {
    add("/waveform/n_cells", "L < N0 required to avoid range aliasing (L=" +
                                 std::to_string(w.n_cells) + ", N0=" + std::to_string(n0) + ")");
  }
  if (w.roots.size() != p.n_tx) {
    add("/waveform/roots", "need one Zadoff-Chu root per transmit antenna (" +
                               std::to_string(p.n_tx) + ")");
  } else if (n0 >= 2) {
    for (std::size_t m = 0; m < w.roots.size(); ++m) {
      const auto r = w.roots[m];
      if (r == 0 || r >= n0 || std::gcd(r, n0) != 1) {
        add("/waveform/roots/" + std::to_string(m),
            "Zadoff-Chu root must satisfy 0 < mu < N0 and gcd(mu, N0) = 1 (mu=" +
                std::to_string(r) + ", N0=" + std::to_string(n0) + ")");
      }
    }
  }

  const auto check_offsets = [&add](const std::vector<double>& offsets, std::size_t expected,
                                    const std::string& path, const char* what) {
    if (offsets.size() != expected) {
      add(path, std::string(what) + " offsets must list " + std::to_string(expected) +
                    " elements");
      return;
    }
    if (!offsets.empty() && offsets.front() != 0.0) {
      add(path + "/0", std::string(what) + " offset of element 0 must be 0");
    }
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      if (!std::isfinite(offsets[i]) || offsets[i] < 0.0) {
        add(path + "/" + std::to_string(i), std::string(what) + " offsets must be finite and >= 0");
      }
    }
  };
  check_offsets(cfg.array.tx_offsets, p.n_tx, "/array/tx_offsets_m", "transmit");
  check_offsets(cfg.array.rx_offsets, p.n_rx, "/array/rx_offsets_m", "receive");

  if (cfg.scene.h.size() != w.n_cells) {
    add("/scene/cells", "scene must span exactly L cells");
  }
  for (const auto& v : cfg.scene.h) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      add("/scene/cells", "scattering coefficients must be finite");
      break;
    }
  }
  if (!valid_angle_deg(rad_to_deg(cfg.scene.dod))) add("/scene/dod_deg", "|DOD| must be < 90 deg");
  if (!valid_angle_deg(rad_to_deg(cfg.scene.doa))) add("/scene/doa_deg", "|DOA| must be < 90 deg");
  if (!valid_angle_deg(rad_to_deg(cfg.pointing.dod_est))) {
    add("/pointing/dod_est_deg", "|estimated DOD| must be < 90 deg");
  }
  if (!valid_angle_deg(rad_to_deg(cfg.pointing.doa_est))) {
    add("/pointing/doa_est_deg", "|estimated DOA| must be < 90 deg");
  }

  if (!(cfg.noise_power >= 0.0) || !std::isfinite(cfg.noise_power)) {
    add("/noise/variance", "noise variance must be >= 0");
  }
  if (cfg.trials < 1) add("/noise/trials", "trials must be >= 1");

  for (std::size_t i = 0; i < cfg.velocity_errors.size(); ++i) {
    if (!std::isfinite(cfg.velocity_errors[i])) {
      add("/sweep/velocity_errors_mps/" + std::to_string(i), "velocity error must be finite");
    }
  }
  for (std::size_t i = 0; i < cfg.pointing_errors_deg.size(); ++i) {
    const double e = cfg.pointing_errors_deg[i];
    if (!valid_angle_deg(rad_to_deg(cfg.scene.dod) + e) ||
        !valid_angle_deg(rad_to_deg(cfg.scene.doa) + e)) {
      add("/sweep/pointing_errors_deg/" + std::to_string(i),
          "pointed angle (true + error) must stay within +-90 deg");
    }
  }
  if (cfg.experiment == Experiment::pointing_sweep) {
    for (std::size_t i = 0; i < cfg.antenna_counts.size(); ++i) {
      const auto& c = cfg.antenna_counts[i];
      const std::string path = "/sweep/antenna_counts/" + std::to_string(i);
      if (c.n_tx < 1 || c.n_rx < 1) {
        add(path, "antenna counts must be >= 1");
      } else if (p.n_subcarriers % c.n_tx != 0) {
        add(path, "N must be multiple of M (N=" + std::to_string(p.n_subcarriers) +
                      ", M=" + std::to_string(c.n_tx) + ")");
      } else if (w.n_cells >= p.n_subcarriers / c.n_tx) {
        add(path, "L < N0 required to avoid range aliasing (L=" + std::to_string(w.n_cells) +
                      ", N0=" + std::to_string(p.n_subcarriers / c.n_tx) + ")");
      }
      if (!cfg.array_is_default && (c.n_tx != p.n_tx || c.n_rx != p.n_rx)) {
        add(path, "antenna-count sweeps require the default half-wavelength arrays");
      }
    }
  }
  return out;
}

std::string canonical_json(const RunConfig& cfg) {
  json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  j["params"] = {{"carrier_hz", cfg.params.carrier_hz},
                 {"bandwidth_hz", cfg.params.bandwidth_hz},
                 {"n_subcarriers", cfg.params.n_subcarriers},
                 {"n_tx", cfg.params.n_tx},
                 {"n_rx", cfg.params.n_rx}};
  j["waveform"] = {{"n_cells", cfg.waveform.n_cells}, {"roots", cfg.waveform.roots}};
  j["array"] = {{"tx_offsets_m", cfg.array.tx_offsets},
                {"rx_offsets_m", cfg.array.rx_offsets},
                {"default_ula", cfg.array_is_default}};
  json cells = json::array();
  for (std::size_t l = 0; l < cfg.scene.h.size(); ++l) {
    if (cfg.scene.h[l] != cplx{}) {
      cells.push_back({{"index", l}, {"re", cfg.scene.h[l].real()}, {"im", cfg.scene.h[l].imag()}});
    }
  }
  j["scene"] = {{"cells", cells},
                {"dod_deg", rad_to_deg(cfg.scene.dod)},
                {"doa_deg", rad_to_deg(cfg.scene.doa)}};
  j["pointing"] = {{"dod_est_deg", rad_to_deg(cfg.pointing.dod_est)},
                   {"doa_est_deg", rad_to_deg(cfg.pointing.doa_est)}};
  j["noise"] = {{"variance", cfg.noise_power}, {"seed", cfg.seed}, {"trials", cfg.trials}};
  json counts = json::array();
  for (const auto& c : cfg.antenna_counts) counts.push_back({{"n_tx", c.n_tx}, {"n_rx", c.n_rx}});
  j["sweep"] = {{"velocity_errors_mps", cfg.velocity_errors},
                {"pointing_errors_deg", cfg.pointing_errors_deg},
                {"antenna_counts", counts}};
  return j.dump();
}

LoadResult load_config(std::string_view text) {
  LoadResult result;
  auto& diags = result.diagnostics;

  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    diags.push_back({"", line, column, std::string("malformed JSON: ") + e.what()});
    return result;
  }
  if (!root.is_object()) {
    diags.push_back({"", 1, 1, "config must be a JSON object"});
    return result;
  }

  Reader rd(diags);
  RunConfig cfg = default_config();
  rd.reject_unknown(root, "", {"experiment", "params", "waveform", "array", "scene", "pointing",
                               "noise", "sweep"});

  if (root.contains("experiment")) {
    const auto& e = root.at("experiment");
    const auto parsed = e.is_string() ? parse_experiment(e.get<std::string>()) : std::nullopt;
    if (parsed) {
      cfg.experiment = *parsed;
    } else {
      rd.error("/experiment",
               "experiment must be one of profile, compare_baselines, doppler_sweep, "
               "pointing_sweep, periodicity");
    }
  }

  if (const json* p = rd.object(root, "params", "")) {
    rd.reject_unknown(*p, "/params", {"carrier_hz", "bandwidth_hz", "n_subcarriers", "n_tx", "n_rx"});
    rd.number(*p, "carrier_hz", "/params", cfg.params.carrier_hz);
    rd.number(*p, "bandwidth_hz", "/params", cfg.params.bandwidth_hz);
    rd.count(*p, "n_subcarriers", "/params", cfg.params.n_subcarriers);
    rd.count(*p, "n_tx", "/params", cfg.params.n_tx);
    rd.count(*p, "n_rx", "/params", cfg.params.n_rx);
  }

  cfg.waveform.n_subcarriers = cfg.params.n_subcarriers;
  cfg.waveform.n_tx = cfg.params.n_tx;
  bool roots_given = false;
  if (const json* w = rd.object(root, "waveform", "")) {
    rd.reject_unknown(*w, "/waveform", {"n_cells", "roots"});
    rd.count(*w, "n_cells", "/waveform", cfg.waveform.n_cells);
    roots_given = rd.array(*w, "roots", "/waveform", cfg.waveform.roots,
                           [&rd](const json& v, const std::string& path, std::size_t& out) {
                             return rd.count_element(v, path, out);
                           });
  }
  if (!roots_given) {
    const auto& p = cfg.params;
    cfg.waveform.roots.clear();
    if (p.n_tx >= 1 && p.n_subcarriers % p.n_tx == 0 && p.n_subcarriers / p.n_tx >= 2) {
      cfg.waveform.roots = default_roots(p.n_subcarriers / p.n_tx, p.n_tx);
    }
  }

  if (cfg.params.carrier_hz > 0.0 && cfg.params.n_tx >= 1 && cfg.params.n_rx >= 1) {
    cfg.array = ArrayGeometry::half_wavelength_ula(cfg.params);
  }
  if (const json* a = rd.object(root, "array", "")) {
    rd.reject_unknown(*a, "/array", {"tx_offsets_m", "rx_offsets_m"});
    auto element = [&rd](const json& v, const std::string& path, double& out) {
      return rd.number_element(v, path, out);
    };
    const bool tx = rd.array(*a, "tx_offsets_m", "/array", cfg.array.tx_offsets, element);
    const bool rx = rd.array(*a, "rx_offsets_m", "/array", cfg.array.rx_offsets, element);
    cfg.array_is_default = !(tx || rx);
  }

  double dod_deg = 30.0, doa_deg = 20.0;
  const std::size_t n_cells = cfg.waveform.n_cells;
  cfg.scene.h.assign(n_cells, cplx{});
  if (n_cells > 0) cfg.scene.h[std::min(kDefaultTargetCell, n_cells - 1)] = 1.0;
  if (const json* s = rd.object(root, "scene", "")) {
    rd.reject_unknown(*s, "/scene", {"cells", "dod_deg", "doa_deg"});
    rd.number(*s, "dod_deg", "/scene", dod_deg);
    rd.number(*s, "doa_deg", "/scene", doa_deg);
    if (s->contains("cells")) {
      const json& cells = s->at("cells");
      if (!cells.is_array()) {
        rd.error("/scene/cells", "expected an array");
      } else {
        std::fill(cfg.scene.h.begin(), cfg.scene.h.end(), cplx{});
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < cells.size(); ++i) {
          const std::string path = "/scene/cells/" + std::to_string(i);
          const json& c = cells[i];
          if (!c.is_object()) {
            rd.error(path, "expected an object {index, re, im}");
            continue;
          }
          rd.reject_unknown(c, path, {"index", "re", "im"});
          std::size_t index = 0;
          double re = 0.0, im = 0.0;
          if (!c.contains("index")) {
            rd.error(path, "missing field 'index'");
            continue;
          }
          rd.count(c, "index", path, index);
          rd.number(c, "re", path, re);
          rd.number(c, "im", path, im);
          if (index >= n_cells) {
            rd.error(path + "/index", "cell index must be < L (" + std::to_string(n_cells) + ")");
          } else if (!seen.insert(index).second) {
            rd.error(path + "/index", "duplicate cell index " + std::to_string(index));
          } else {
            cfg.scene.h[index] = cplx(re, im);
          }
        }
      }
    }
  }
  cfg.scene.dod = deg_to_rad(dod_deg);
  cfg.scene.doa = deg_to_rad(doa_deg);

  double dod_est_deg = dod_deg, doa_est_deg = doa_deg;
  if (const json* pt = rd.object(root, "pointing", "")) {
    rd.reject_unknown(*pt, "/pointing", {"dod_est_deg", "doa_est_deg"});
    rd.number(*pt, "dod_est_deg", "/pointing", dod_est_deg);
    rd.number(*pt, "doa_est_deg", "/pointing", doa_est_deg);
  }
  cfg.pointing = {deg_to_rad(dod_est_deg), deg_to_rad(doa_est_deg)};

  if (const json* n = rd.object(root, "noise", "")) {
    rd.reject_unknown(*n, "/noise", {"variance", "seed", "trials"});
    rd.number(*n, "variance", "/noise", cfg.noise_power);
    if (n->contains("seed")) {
      const json& s = n->at("seed");
      if (s.is_number_unsigned()) {
        cfg.seed = s.get<std::uint64_t>();
      } else {
        rd.error("/noise/seed", "expected a non-negative integer");
      }
    }
    rd.count(*n, "trials", "/noise", cfg.trials);
  }

  if (const json* sw = rd.object(root, "sweep", "")) {
    rd.reject_unknown(*sw, "/sweep", {"velocity_errors_mps", "pointing_errors_deg", "antenna_counts"});
    auto element = [&rd](const json& v, const std::string& path, double& out) {
      return rd.number_element(v, path, out);
    };
    rd.array(*sw, "velocity_errors_mps", "/sweep", cfg.velocity_errors, element);
    rd.array(*sw, "pointing_errors_deg", "/sweep", cfg.pointing_errors_deg, element);
    rd.array(*sw, "antenna_counts", "/sweep", cfg.antenna_counts,
             [&rd](const json& v, const std::string& path, AntennaCount& out) {
               if (!v.is_object() || !v.contains("n_tx") || !v.contains("n_rx")) {
                 rd.error(path, "expected an object {n_tx, n_rx}");
                 return false;
               }
               rd.count(v, "n_tx", path, out.n_tx);
               rd.count(v, "n_rx", path, out.n_rx);
               return true;
             });
  }

  if (diags.empty()) {
    diags = validate(cfg);
  }
  for (auto& d : diags) {
    if (d.line != 0) continue;
    if (const auto offset = locate(text, d.path)) {
      const auto [line, column] = line_column(text, *offset);
      d.line = line;
      d.column = column;
    }
  }
  if (diags.empty()) {
    cfg.canonical = canonical_json(cfg);
    result.config = std::move(cfg);
  }
  return result;
}

}  // namespace cpofdm
