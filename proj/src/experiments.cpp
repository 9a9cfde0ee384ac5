#include "cpofdm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include "cpofdm/analysis.hpp"
#include "cpofdm/baselines.hpp"
#include "json.hpp"

namespace cpofdm {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON cannot carry infinities; they are reported as null.
ordered_json json_number(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json json_complex(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

class CsvFile {
 public:
  CsvFile(const RunConfig& cfg, std::string_view columns) {
    text_ = "# cpofdm " + std::string(kVersion) + " experiment=" +
            std::string(to_string(cfg.experiment)) + "\n";
    text_ += "# config_hash=" + cfg.hash_hex() + " seed=" + std::to_string(cfg.seed) +
             " noise_generator=" + std::string(kNoiseGenerator) + "\n";
    text_ += std::string(columns) + "\n";
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((text_ += (first ? "" : ","), text_ += cell(fields), first = false), ...);
    text_ += "\n";
  }

  const std::string& text() const { return text_; }

 private:
  static std::string cell(double v) { return fmt_double(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

  std::string text_;
};

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
    files_.push_back(path);
  }

  std::vector<fs::path> files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

ordered_json provenance(const RunConfig& cfg) {
  return {{"tool", "cpofdm"},
          {"version", std::string(kVersion)},
          {"experiment", std::string(to_string(cfg.experiment))},
          {"config_hash", cfg.hash_hex()},
          {"seed", cfg.seed},
          {"noise_generator", std::string(kNoiseGenerator)},
          {"propagation_speed_mps", kPropagationSpeed}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct Pipeline {
  RadarParams params;
  ArrayGeometry geom;
  WaveformConfig wcfg;
  SubcarrierWeights weights;
  TxWaveformSet tx;

  Pipeline(const RadarParams& p, const ArrayGeometry& g, const WaveformConfig& w)
      : params(p), geom(g), wcfg(w), weights(design_subcarrier_weights(w)),
        tx(synthesize_tx(weights, w.n_cells)) {}
};

std::size_t strongest_cell(const Scene& scene) {
  std::size_t best = 0;
  for (std::size_t l = 0; l < scene.h.size(); ++l) {
    if (std::abs(scene.h[l]) > std::abs(scene.h[best])) best = l;
  }
  return best;
}

std::vector<std::size_t> mainlobe_of(const Scene& scene) {
  auto support = scene.support();
  if (support.empty()) support.push_back(0);
  return support;
}

void write_cp_profile(OutputDir& out, const RunConfig& cfg, const std::string& name,
                      const RangeProfile& profile) {
  CsvFile csv(cfg, "n,re,im,magnitude_db");
  const auto mags = magnitudes(profile.h_hat);
  const double peak = *std::max_element(mags.begin(), mags.end());
  for (std::size_t n = 0; n < profile.h_hat.size(); ++n) {
    const double db = peak > 0.0 && mags[n] > 0.0 ? std::max(-300.0, magnitude_db(mags[n] / peak))
                                                  : -300.0;
    csv.row(n, profile.h_hat[n].real(), profile.h_hat[n].imag(), db);
  }
  out.write(name, csv.text());
}

void write_magnitude_profile(OutputDir& out, const RunConfig& cfg, const std::string& name,
                             const std::vector<double>& mags) {
  CsvFile csv(cfg, "n,magnitude,magnitude_db");
  const auto db = normalize_peak_db(mags);
  for (std::size_t n = 0; n < mags.size(); ++n) csv.row(n, mags[n], db[n]);
  out.write(name, csv.text());
}

struct MonteCarloSnr {
  double empirical = std::numeric_limits<double>::quiet_NaN();
  double empty_cell_variance = std::numeric_limits<double>::quiet_NaN();
};

bool monte_carlo_enabled(const RunConfig& cfg) { return cfg.noise_power > 0.0 && cfg.trials >= 100; }

MonteCarloSnr monte_carlo_snr(const Pipeline& pipe, const RunConfig& cfg, const Scene& scene,
                              const PointingEstimate& est, bool about_mean) {
  const std::size_t cell = strongest_cell(scene);
  const std::size_t n = pipe.params.n_subcarriers;
  // first cell beyond the tracking zone that holds no replica of the target
  const std::size_t empty = pipe.wcfg.n_cells < n ? pipe.wcfg.n_cells : n - 1;
  ComplexVector at_cell, at_empty;
  for_each_trial(pipe.tx, pipe.weights, scene, pipe.geom, pipe.params, est, cfg.noise_power,
                 cfg.seed, cfg.trials, [&](std::size_t, const RangeProfile& p) {
                   at_cell.push_back(p.h_hat[cell]);
                   at_empty.push_back(p.h_hat[empty]);
                 });
  MonteCarloSnr mc;
  mc.empirical = about_mean ? empirical_snr_about_mean(at_cell) : empirical_snr(at_cell, scene.h[cell]);
  mc.empty_cell_variance = cell_statistics(at_empty).variance;
  return mc;
}

struct ProfileOutputs {
  RangeProfile cp;
  std::vector<double> conv;
  std::vector<double> lfm;
};

ProfileOutputs profile_triple(const Pipeline& pipe, const RunConfig& cfg) {
  const auto capture =
      simulate_rx(pipe.tx, cfg.scene, pipe.geom, pipe.params, cfg.noise_power, cfg.seed);
  ProfileOutputs out;
  out.cp = reconstruct_with_pointing_error(capture, pipe.weights, pipe.geom, pipe.params,
                                           cfg.pointing, pipe.wcfg.n_cells);
  out.conv = conventional_ofdm_profile(cfg.scene, pipe.weights, pipe.geom, pipe.params,
                                       cfg.noise_power, cfg.seed);
  const auto& p = pipe.params;
  const auto lfm = lfm_waveform(p.n_subcarriers, p.bandwidth_hz,
                                static_cast<double>(p.n_subcarriers) / p.bandwidth_hz);
  // post-beamforming noise referred to unit signal gain: Q sigma^2 / Q^2
  out.lfm = lfm_profile(cfg.scene, lfm, cfg.noise_power / static_cast<double>(p.n_rx), cfg.seed);
  return out;
}

std::vector<fs::path> run_profile(const RunConfig& cfg, OutputDir& out, bool compare) {
  const Pipeline pipe(cfg.params, cfg.array, cfg.waveform);
  const auto triple = profile_triple(pipe, cfg);
  write_cp_profile(out, cfg, "cp_ofdm.csv", triple.cp);
  write_magnitude_profile(out, cfg, "conv_ofdm.csv", triple.conv);
  write_magnitude_profile(out, cfg, "lfm.csv", triple.lfm);

  const auto mainlobe = mainlobe_of(cfg.scene);
  const auto cp_mags = magnitudes(triple.cp.h_hat);
  const auto report = pointing_weights(cfg.array, cfg.params, cfg.scene.dod, cfg.scene.doa,
                                       cfg.pointing);
  const cplx h = cfg.scene.h[strongest_cell(cfg.scene)];

  ordered_json metrics = provenance(cfg);
  if (cfg.noise_power > 0.0) {
    const auto spectrum = equivalent_spectrum(pipe.weights, cfg.array, cfg.params, cfg.scene.dod);
    metrics["snr_pred_db"] = json_number(power_db(predicted_snr(h, cfg.noise_power, spectrum,
                                                                cfg.params.n_rx)));
    metrics["snr_error_db"] = json_number(power_db(snr_error(report, h, cfg.noise_power, cfg.params)));
  } else {
    metrics["snr_pred_db"] = nullptr;
    metrics["snr_error_db"] = nullptr;
  }
  if (monte_carlo_enabled(cfg)) {
    const auto mc = monte_carlo_snr(pipe, cfg, cfg.scene, cfg.pointing, false);
    metrics["snr_emp_db"] = json_number(power_db(mc.empirical));
    metrics["noise_variance_emp"] = json_number(mc.empty_cell_variance);
    metrics["noise_variance_pred"] = reconstruction_noise_variance(
        cfg.noise_power, cfg.params.n_rx, cfg.params.n_tx, cfg.params.n_subcarriers);
    metrics["trials"] = cfg.trials;
  } else {
    metrics["snr_emp_db"] = nullptr;
  }
  metrics["snr_loss_db"] = report.snr_loss_db;
  metrics["pslr_db"] = {{"cp_ofdm", json_number(pslr_db(cp_mags, mainlobe))},
                        {"conv_ofdm", json_number(pslr_db(triple.conv, mainlobe))},
                        {"lfm", json_number(pslr_db(triple.lfm, mainlobe))}};
  metrics["pslr_mainlobe_cells"] = mainlobe;
  ordered_json weights = ordered_json::array();
  for (const auto& w : report.w) weights.push_back(json_complex(w));
  metrics["weights"] = weights;
  metrics["q_tilde"] = json_complex(report.q_tilde);
  metrics["m_tilde"] = json_complex(report.m_tilde);

  if (compare) {
    const auto support = cfg.scene.support();
    CsvFile csv(cfg, "cell,true_db,cp_ofdm_db,conv_ofdm_db,lfm_db");
    const double strongest = std::abs(h);
    const auto conv_db = normalize_peak_db(triple.conv);
    const auto lfm_db = normalize_peak_db(triple.lfm);
    const auto cp_db = normalize_peak_db(cp_mags);
    for (std::size_t l : support) {
      csv.row(l, magnitude_db(std::abs(cfg.scene.h[l]) / strongest), cp_db[l], conv_db[l], lfm_db[l]);
    }
    out.write("scatterers.csv", csv.text());
    const std::vector<double> cp_zone(cp_mags.begin(),
                                      cp_mags.begin() + static_cast<std::ptrdiff_t>(cfg.waveform.n_cells));
    metrics["masked_cells"] = {{"cp_ofdm", masked_cells(cp_zone, cfg.scene.h)},
                               {"conv_ofdm", masked_cells(triple.conv, cfg.scene.h)},
                               {"lfm", masked_cells(triple.lfm, cfg.scene.h)}};
  }
  out.write("metrics.json", dump(metrics));
  return out.files();
}

std::vector<fs::path> run_doppler_sweep(const RunConfig& cfg, OutputDir& out) {
  const Pipeline pipe(cfg.params, cfg.array, cfg.waveform);
  const auto base = simulate_rx(pipe.tx, cfg.scene, pipe.geom, pipe.params, cfg.noise_power, cfg.seed);
  const auto mainlobe = mainlobe_of(cfg.scene);
  const std::size_t n_cells = cfg.waveform.n_cells;
  const std::size_t n0 = cfg.waveform.subcarriers_per_tx();
  const std::size_t target = strongest_cell(cfg.scene);

  CsvFile summary(cfg,
                  "velocity_error_mps,doppler_hz,peak_cell,zone_sidelobe_db,conv_zone_sidelobe_db,"
                  "max_replica_db,replica_coherence");
  for (std::size_t i = 0; i < cfg.velocity_errors.size(); ++i) {
    const double dv = cfg.velocity_errors[i];
    const auto capture = apply_doppler_residue(base, dv, cfg.params);
    const auto profile = reconstruct_with_pointing_error(capture, pipe.weights, pipe.geom,
                                                         pipe.params, cfg.pointing, n_cells);
    const auto conv = conventional_ofdm_profile(cfg.scene, pipe.weights, pipe.geom, pipe.params,
                                                cfg.noise_power, cfg.seed, dv);
    write_cp_profile(out, cfg, "doppler_" + std::to_string(i) + ".csv", profile);

    const auto mags = magnitudes(profile.h_hat);
    const std::vector<double> zone(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(n_cells));
    const auto peak_cell = static_cast<std::size_t>(
        std::max_element(zone.begin(), zone.end()) - zone.begin());
    double replica = 0.0;
    for (std::size_t period = 1; period < cfg.params.n_tx; ++period) {
      replica = std::max(replica, mags[target + period * n0]);
    }
    const double replica_db =
        replica > 0.0 ? std::max(-300.0, magnitude_db(replica / mags[target])) : -300.0;
    double coherence = std::numeric_limits<double>::quiet_NaN();
    if (dv != 0.0) {
      const auto c = period_coherence(profile, cfg.scene.h, n0, cfg.params.n_tx);
      coherence = c.size() > 1 ? *std::max_element(c.begin() + 1, c.end()) : 0.0;
    }
    summary.row(dv, doppler_shift_hz(dv, cfg.params), peak_cell, pslr_db(zone, mainlobe),
                pslr_db(conv, mainlobe), replica_db, coherence);
  }
  out.write("doppler_summary.csv", summary.text());
  ordered_json manifest_extra = provenance(cfg);
  manifest_extra["doppler_model"] = std::string(kDopplerModel);
  out.write("metrics.json", dump(manifest_extra));
  return out.files();
}

std::vector<fs::path> run_pointing_sweep(const RunConfig& cfg, OutputDir& out) {
  const bool mc = monte_carlo_enabled(cfg);
  CsvFile csv(cfg, "n_tx,n_rx,error_deg,loss_db_pred,loss_db_mc");
  ordered_json table = ordered_json::array();
  for (const auto& counts : cfg.antenna_counts) {
    RadarParams params = cfg.params;
    params.n_tx = counts.n_tx;
    params.n_rx = counts.n_rx;
    const ArrayGeometry geom =
        cfg.array_is_default ? ArrayGeometry::half_wavelength_ula(params) : cfg.array;
    WaveformConfig wcfg = WaveformConfig::with_default_roots(params.n_subcarriers, params.n_tx,
                                                             cfg.waveform.n_cells);
    if (counts.n_tx == cfg.params.n_tx) wcfg.roots = cfg.waveform.roots;

    std::optional<Pipeline> pipe;
    double reference_snr = 0.0;
    if (mc) {
      pipe.emplace(params, geom, wcfg);
      reference_snr = monte_carlo_snr(*pipe, cfg, cfg.scene, {cfg.scene.dod, cfg.scene.doa}, true)
                          .empirical;
    }
    for (double err : cfg.pointing_errors_deg) {
      const PointingEstimate est{cfg.scene.dod + deg_to_rad(err), cfg.scene.doa + deg_to_rad(err)};
      const auto report = pointing_weights(geom, params, cfg.scene.dod, cfg.scene.doa, est);
      double loss_mc = std::numeric_limits<double>::quiet_NaN();
      if (mc) {
        const double snr = monte_carlo_snr(*pipe, cfg, cfg.scene, est, true).empirical;
        loss_mc = power_db(reference_snr / snr);
      }
      csv.row(counts.n_tx, counts.n_rx, err, report.snr_loss_db, loss_mc);
      table.push_back({{"n_tx", counts.n_tx},
                       {"n_rx", counts.n_rx},
                       {"error_deg", err},
                       {"snr_loss_db", report.snr_loss_db},
                       {"snr_loss_db_mc", json_number(loss_mc)},
                       {"q_tilde", json_complex(report.q_tilde)},
                       {"m_tilde", json_complex(report.m_tilde)}});
    }
  }
  out.write("pointing_loss.csv", csv.text());
  ordered_json metrics = provenance(cfg);
  metrics["pointing_loss"] = table;
  out.write("metrics.json", dump(metrics));
  return out.files();
}

std::vector<fs::path> run_periodicity(const RunConfig& cfg, OutputDir& out) {
  const Pipeline pipe(cfg.params, cfg.array, cfg.waveform);
  const auto capture = simulate_rx(pipe.tx, cfg.scene, pipe.geom, pipe.params, cfg.noise_power, cfg.seed);
  const auto profile = reconstruct_with_pointing_error(capture, pipe.weights, pipe.geom, pipe.params,
                                                       cfg.pointing, cfg.waveform.n_cells);
  write_cp_profile(out, cfg, "periodicity.csv", profile);

  const std::size_t m = cfg.params.n_tx;
  const std::size_t n0 = cfg.waveform.subcarriers_per_tx();
  const auto report = pointing_weights(cfg.array, cfg.params, cfg.scene.dod, cfg.scene.doa,
                                       cfg.pointing);
  const auto support = mainlobe_of(cfg.scene);
  const auto gains = periodicity_check(profile, n0, m, support);

  ordered_json metrics = provenance(cfg);
  metrics["period"] = n0;
  ordered_json measured = ordered_json::array(), predicted = ordered_json::array();
  for (std::size_t i = 0; i < m; ++i) {
    measured.push_back(json_complex(gains[i]));
    predicted.push_back(json_complex(report.w[(m - i) % m] / report.w[0]));
  }
  metrics["period_gains"] = measured;
  metrics["period_gains_pred"] = predicted;
  ordered_json weights = ordered_json::array();
  for (const auto& w : report.w) weights.push_back(json_complex(w));
  metrics["weights"] = weights;
  metrics["q_tilde"] = json_complex(report.q_tilde);
  metrics["m_tilde"] = json_complex(report.m_tilde);
  metrics["snr_loss_db"] = report.snr_loss_db;
  out.write("metrics.json", dump(metrics));
  return out.files();
}

}  // namespace

void for_each_trial(const TxWaveformSet& tx, const SubcarrierWeights& weights, const Scene& scene,
                    const ArrayGeometry& geom, const RadarParams& params,
                    const PointingEstimate& est, double noise_power, std::uint64_t seed,
                    std::size_t trials,
                    const std::function<void(std::size_t, const RangeProfile&)>& visit) {
  const std::size_t n_cells = tx.cp_len() + 1;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto capture = simulate_rx(tx, scene, geom, params, noise_power, mix_seed(seed, t));
    visit(t, reconstruct_with_pointing_error(capture, weights, geom, params, est, n_cells));
  }
}

std::vector<fs::path> run(const RunConfig& cfg, const fs::path& out_dir) {
  OutputDir out(out_dir);
  std::vector<fs::path> files;
  switch (cfg.experiment) {
    case Experiment::profile:
      files = run_profile(cfg, out, false);
      break;
    case Experiment::compare_baselines:
      files = run_profile(cfg, out, true);
      break;
    case Experiment::doppler_sweep:
      files = run_doppler_sweep(cfg, out);
      break;
    case Experiment::pointing_sweep:
      files = run_pointing_sweep(cfg, out);
      break;
    case Experiment::periodicity:
      files = run_periodicity(cfg, out);
      break;
  }

  ordered_json manifest = provenance(cfg);
  manifest["doppler_model"] = std::string(kDopplerModel);
  manifest["config"] = ordered_json::parse(cfg.canonical);
  ordered_json listed = ordered_json::array();
  for (const auto& f : files) listed.push_back(f.filename().string());
  manifest["files"] = listed;
  out.write("manifest.json", dump(manifest));
  return out.files();
}

std::string waveform_csv(const RunConfig& cfg) {
  const auto weights = design_subcarrier_weights(cfg.waveform);
  const auto tx = synthesize_tx(weights, cfg.waveform.n_cells);
  CsvFile csv(cfg, "antenna,n,re,im");
  for (std::size_t m = 0; m < tx.n_tx(); ++m) {
    const auto row = tx.row(m);
    for (std::size_t n = 0; n < row.size(); ++n) csv.row(m, n, row[n].real(), row[n].imag());
  }
  return csv.text();
}

}  // namespace cpofdm
