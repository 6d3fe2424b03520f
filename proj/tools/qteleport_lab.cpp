#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtel/channels.hpp"
#include "qtel/eig.hpp"
#include "qtel/metrics.hpp"
#include "qtel/optimize.hpp"
#include "qtel/parallel.hpp"
#include "qtel/report.hpp"
#include "qtel/rng.hpp"
#include "qtel/sampling.hpp"
#include "qtel/states.hpp"
#include "qtel/tensor.hpp"
#include "qtel/version.hpp"

namespace {

using namespace qtel;

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// closed forms used as expected values
// ---------------------------------------------------------------------------

double iso_overlap_cf(double q, double th, double ph, double al, double be) {
  const double s = std::cos(th - al) + std::cos(ph - be);
  return (1.0 - q) / 16.0 + q / 4.0 * s * s;
}

double gs_overlap_cf(double q, double th, double ph, double al, double be, double ga, double de) {
  const double s = std::cos(th - al) + std::cos(ph - be);
  const double ct = std::cos(th - ga), cp = std::cos(ph - de);
  return q / 4.0 * s * s + (1.0 - q) / 8.0 * (ct * ct + cp * cp);
}

double iso_neg_cf(double q, double eps) {
  return std::max(0.0, -(1.0 - q) / 2.0 + q * std::sin(2.0 * eps));
}

double gs_disc(double q) { return std::sqrt(17.0 * q * q - 2.0 * q + 1.0); }

double gs_gsf_cf(double q) { return (1.0 + 3.0 * q + gs_disc(q)) / 8.0; }

double gs_angle(double q) { return 0.5 * std::acos((1.0 - q) / gs_disc(q)); }

double gs_neg_cf(double q, double eps) {
  return std::max(0.0, (5.0 * q * q - 2.0 * q + 1.0) / gs_disc(q) * std::sin(2.0 * eps));
}

double ghz_overlap_cf(double th) {
  const double c = std::cos(th);
  return 0.5 * c * c;
}

double w_overlap_cf(double th, double ph) {
  return (2.0 + std::sin(2.0 * th) + 2.0 * std::sin(th + ph) + 2.0 * std::cos(th - ph) +
          std::sin(2.0 * ph)) /
         16.0;
}

double ghz_neg_cf(double th, double eps) {
  return std::max(0.0, std::cos(2.0 * th) * std::sin(2.0 * eps));
}

double w_neg_cf(double ph, double eps) {
  return std::max(0.0, 0.5 * std::sin(2.0 * ph) * std::sin(2.0 * eps));
}

double smolin_fid_cf(double eps) {
  const double s = std::sin(2.0 * eps);
  return 0.5 * (1.0 + s * s);
}

// Filter closed forms for Upsilon^00; f1's overall sign and f3's first factor
// follow the GHZ anchor (1, 1, 1/2), see README.
double f1_cf(double th, double ph) {
  const double c2t = std::cos(2.0 * th), c2p = std::cos(2.0 * ph);
  const double s2t = std::sin(2.0 * th), s2p = std::sin(2.0 * ph);
  return -0.5 * (c2t * s2p * s2p + c2p * s2t * s2t);
}

double f2_cf(double th, double ph) {
  const double c2t = std::cos(2.0 * th), c2p = std::cos(2.0 * ph);
  const double s2t = std::sin(2.0 * th), s2p = std::sin(2.0 * ph);
  return 0.5 * s2t * s2t * s2p * s2p + 0.25 * (1.0 - c2t * c2p) * (s2t * s2t + s2p * s2p);
}

double f3_cf(double th, double ph) {
  const double c2t = std::cos(2.0 * th), c2p = std::cos(2.0 * ph);
  const double s2t = std::sin(2.0 * th), s2p = std::sin(2.0 * ph);
  const double cc = c2t * c2p;
  return (1.0 - cc) * (2.0 + cc) * (2.0 * (s2t * s2t + s2p * s2p) - (c2t - c2p) * (c2t - c2p)) /
         8.0;
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

const std::array<Mat, 16>& pauli_pairs() {
  static const std::array<Mat, 16> ops = [] {
    std::array<Mat, 16> o;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) o[static_cast<std::size_t>(4 * mu + nu)] = pauli_pair(mu, nu);
    return o;
  }();
  return ops;
}

Mat teleport_with_weights(const std::array<double, 16>& w, const Mat& rho) {
  Mat out(4, 4);
  for (std::size_t i = 0; i < 16; ++i) {
    const Mat& u = pauli_pairs()[i];
    out = out + dagger(u) * rho * u * cplx{w[i], 0.0};
  }
  return out;
}

double output_negativity(const std::array<double, 16>& w, double eps) {
  const Vec psi = input_state(InputAngle{eps});
  const Mat out = teleport_with_weights(w, outer(psi, psi));
  return negativity(out, SubsystemMask::of(2, {0}));
}

int emit(const RunConfig& config, const std::string& text) {
  if (config.output_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream os(config.output_path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open output path: " << config.output_path << "\n";
    return 2;
  }
  os << text;
  if (!os) {
    std::cerr << "error: write failed: " << config.output_path << "\n";
    return 2;
  }
  return 0;
}

std::string render_checks(const RunConfig& config, const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  if (config.format == "json") {
    os << checks_to_json(config, checks).dump(2) << "\n";
  } else {
    write_checks_csv(os, config, checks);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

std::vector<CheckResult> reproduce_checks() {
  std::vector<CheckResult> checks;
  auto add = [&](std::string id, double expected, double computed, double tol,
                 std::string anchor) {
    checks.push_back(make_check(std::move(id), expected, computed, tol, std::move(anchor)));
  };

  // isotropic admixture family
  {
    const AnglePair ab{0.3, -0.2};
    double max_dev = 0.0;
    const Mat xi = iso_mixture(ab, 0.35);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        const double th = -1.2 + 0.4 * i;
        const double ph = -1.2 + 0.4 * j;
        const double direct = gsf_objective(xi, th, ph);
        max_dev = std::max(max_dev, std::abs(direct - iso_overlap_cf(0.35, th, ph, 0.3, -0.2)));
      }
    add("overlap_iso", 0.0, max_dev, 1e-9,
        "overlap = (1-q)/16 + (q/4)[cos(th-a)+cos(ph-b)]^2");

    const OptResult g = generalized_singlet_fraction(xi);
    add("gsf_iso", (1.0 + 15.0 * 0.35) / 16.0, g.value, 1e-9, "G = (1+15q)/16 at matched angles");

    const double q_crit = bisect(
        [&](double q) {
          return generalized_singlet_fraction(iso_mixture(ab, q)).value - 0.5;
        },
        0.05, 0.95, 1e-12);
    add("q_crit_iso", 7.0 / 15.0, q_crit, 1e-9, "G = 1/2 at q_crit = 7/15");

    const double q_quarter = bisect(
        [&](double q) {
          return generalized_singlet_fraction(iso_mixture(ab, q)).value - 0.25;
        },
        0.01, 0.95, 1e-12);
    add("g_quarter_iso", 0.2, q_quarter, 1e-9, "G = 1/4 at q = 1/5");

    double neg_dev = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double q = 0.1 * i;
      const auto w = upsilon_weights(iso_mixture(ab, q), ab);
      for (int j = 0; j < 9; ++j) {
        const double eps = kPi / 2.0 * j / 8.0;
        neg_dev = std::max(neg_dev, std::abs(output_negativity(w, eps) - iso_neg_cf(q, eps)));
      }
    }
    add("neg_iso", 0.0, neg_dev, 1e-9, "N = max{0, -(1-q)/2 + q sin 2eps}");

    const auto w5 = upsilon_weights(iso_mixture(ab, 0.2), ab);
    add("neg_iso_at_g_quarter", 0.0, output_negativity(w5, kPi / 4.0), 1e-9,
        "N = 0 when q <= 1/5 (G <= 1/4)");
  }

  // generalized-Smolin admixture family (a = b = pi/4, c = d = 0)
  {
    const AnglePair ab{kPi / 4.0, kPi / 4.0};
    const AnglePair gd{0.0, 0.0};
    double max_dev = 0.0;
    const Mat xi_half = gs_mixture(ab, gd, 0.5);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        const double th = -1.2 + 0.4 * i;
        const double ph = -1.2 + 0.4 * j;
        const double direct = gsf_objective(xi_half, th, ph);
        max_dev = std::max(max_dev, std::abs(direct - gs_overlap_cf(0.5, th, ph, kPi / 4.0,
                                                                    kPi / 4.0, 0.0, 0.0)));
      }
    add("overlap_gs", 0.0, max_dev, 1e-9,
        "overlap = (q/4)[cos(th-a)+cos(ph-b)]^2 + ((1-q)/8)[cos^2(th-c)+cos^2(ph-d)]");

    const OptResult g = generalized_singlet_fraction(gs_mixture(ab, gd, 0.7));
    add("gsf_gs", gs_gsf_cf(0.7), g.value, 1e-8,
        "G = (1 + 3q + sqrt(17q^2-2q+1))/8");

    const double q_crit = bisect(
        [&](double q) {
          return generalized_singlet_fraction(gs_mixture(ab, gd, q)).value - 0.5;
        },
        0.05, 0.95, 1e-12);
    add("q_crit_gs", 0.414214, q_crit, 1e-6, "nonclassical fidelity for q > q_crit = 0.414214");

    double neg_dev = 0.0;
    double neg_min = 1e300;
    for (int i = 1; i <= 9; ++i) {
      const double q = 0.1 * i;
      const double ang = gs_angle(q);
      const auto w = upsilon_weights(gs_mixture(ab, gd, q), AnglePair{ang, ang});
      for (int j = 1; j < 8; ++j) {
        const double eps = kPi / 2.0 * j / 8.0;
        const double n = output_negativity(w, eps);
        neg_dev = std::max(neg_dev, std::abs(n - gs_neg_cf(q, eps)));
        neg_min = std::min(neg_min, n);
      }
    }
    add("neg_gs", 0.0, neg_dev, 1e-8, "N = max{0, (5q^2-2q+1)/sqrt(17q^2-2q+1) sin 2eps}");
    add("neg_gs_positive", 1.0, neg_min > 1e-12 ? 1.0 : 0.0, 0.5,
        "N nonzero for all 0 < q < 1");
  }

  // Smolin boundary state
  {
    const Mat smolin = named_state(NamedState::Smolin);
    const AnglePair zero{0.0, 0.0};
    add("gsf_smolin", 0.25, generalized_singlet_fraction(smolin).value, 1e-9,
        "G = 1/4 for the Smolin state");
    add("fid_smolin", 0.4, fidelity_pair(smolin, zero, RecoverySet4::paulis()), 1e-12,
        "Phi = 2/5 at G = 1/4");

    const auto w = upsilon_weights(smolin, zero);
    double fid_dev = 0.0, neg_dev = 0.0;
    for (int j = 0; j < 9; ++j) {
      const double eps = kPi / 2.0 * j / 8.0;
      const Vec psi = input_state(InputAngle{eps});
      const Mat out = teleport_with_weights(w, outer(psi, psi));
      fid_dev = std::max(fid_dev,
                         std::abs(quad_form(psi, out, psi).real() - smolin_fid_cf(eps)));
      neg_dev = std::max(neg_dev, std::abs(output_negativity(w, eps) -
                                           std::max(0.0, std::sin(2.0 * eps))));
    }
    add("fid_smolin_input", 0.0, fid_dev, 1e-10, "<Psi|out|Psi> = (1 + sin^2 2eps)/2");
    add("neg_smolin_input", 0.0, neg_dev, 1e-9, "N = max{0, sin 2eps} through the Smolin state");

    add("neg_smolin_cut", 1.0, negativity(smolin, SubsystemMask::of(4, {0})), 1e-10,
        "N = 1 across the A3:(A4B1B2) cut");

    double pt_dev = 0.0;
    for (int qkeep = 0; qkeep < 4; ++qkeep) {
      std::vector<bool> sel(4, true);
      sel[static_cast<std::size_t>(qkeep)] = false;
      SubsystemMask keep;
      keep.selected = sel;
      const Mat reduced = partial_trace(smolin, keep);
      pt_dev = std::max(pt_dev, max_abs_diff(reduced, Mat::identity(8) * cplx{0.125, 0.0}));
    }
    add("smolin_one_qubit_loss", 0.0, pt_dev, 1e-12,
        "any one particle loss gives the completely random state");
  }

  // GHZ / W family
  {
    const Mat ghz = named_state(NamedState::GHZ4);
    const Mat w1 = named_state(NamedState::W1);
    double ghz_dev = 0.0, w_dev = 0.0;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        const double th = -1.4 + 0.35 * i;
        const double ph = -1.4 + 0.35 * j;
        ghz_dev = std::max(ghz_dev, std::abs(gsf_objective(ghz, th, ph) - ghz_overlap_cf(th)));
        w_dev = std::max(w_dev, std::abs(gsf_objective(w1, th, ph) - w_overlap_cf(th, ph)));
      }
    add("overlap_ghz", 0.0, ghz_dev, 1e-10, "<Ups|Xi_GHZ|Ups> = cos^2(th)/2");
    add("overlap_w", 0.0, w_dev, 1e-10,
        "<Ups|Xi_W|Ups> = [2 + sin 2th + 2 sin(th+ph) + 2 cos(th-ph) + sin 2ph]/16");
    add("overlap_w_origin", 0.25, gsf_objective(w1, 0.0, 0.0), 1e-12,
        "W overlap 1/4 at zero angles");

    const OptResult g_ghz = generalized_singlet_fraction(ghz);
    add("gsf_ghz", 0.5, g_ghz.value, 1e-8, "G = 1/2 for GHZ at th = 0");
    add("gsf_ghz_argmax_theta", 0.0, g_ghz.argmax_angles.theta, 1e-6,
        "GHZ optimum sits at th = 0 (flat in ph)");
    const OptResult g_w = generalized_singlet_fraction(w1);
    add("gsf_w1", 0.5, g_w.value, 1e-8, "G = 1/2 for W at th = ph = pi/4");
    add("gsf_w1_argmax", 0.0,
        std::hypot(g_w.argmax_angles.theta - kPi / 4.0, g_w.argmax_angles.phi - kPi / 4.0), 1e-6,
        "W optimum sits at (pi/4, pi/4)");

    // teleported negativities on the principal angle domains
    double ghz_neg_dev = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double th = -kPi / 4.0 + kPi / 2.0 * i / 4.0;
      const auto w = upsilon_weights(ghz, AnglePair{th, 0.2});
      for (int j = 0; j < 5; ++j) {
        const double eps = kPi / 2.0 * j / 4.0;
        ghz_neg_dev =
            std::max(ghz_neg_dev, std::abs(output_negativity(w, eps) - ghz_neg_cf(th, eps)));
      }
    }
    add("neg_ghz", 0.0, ghz_neg_dev, 1e-9, "N = max{0, cos 2th sin 2eps} for |th| <= pi/4");

    double w_neg_dev = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double ph = kPi / 4.0 * i / 4.0;
      const auto w = upsilon_weights(w1, AnglePair{0.0, ph});
      for (int j = 0; j < 5; ++j) {
        const double eps = kPi / 2.0 * j / 4.0;
        w_neg_dev = std::max(w_neg_dev, std::abs(output_negativity(w, eps) - w_neg_cf(ph, eps)));
      }
    }
    add("neg_w", 0.0, w_neg_dev, 1e-9,
        "N = max{0, (1/2) sin 2ph sin 2eps} for ph in [0, pi/4]");
    const auto w00 = upsilon_weights(w1, AnglePair{0.0, 0.0});
    add("neg_w_origin", 0.0, output_negativity(w00, kPi / 4.0), 1e-9,
        "no entanglement teleported through W at zero angles");
  }

  // SLOCC filters
  {
    const FilterValues ghz = filter_expectations(named_state_vector(NamedState::GHZ4));
    add("filters_ghz_f1", 1.0, ghz.f1, 1e-12, "F1[GHZ] = 1");
    add("filters_ghz_f2", 1.0, ghz.f2, 1e-12, "F2[GHZ] = 1");
    add("filters_ghz_f3", 0.5, ghz.f3, 1e-12, "F3[GHZ] = 1/2");
    const FilterValues w0 = filter_expectations(named_state_vector(NamedState::W0));
    add("filters_w0", 0.0, std::max({std::abs(w0.f1), std::abs(w0.f2), std::abs(w0.f3)}), 1e-12,
        "filters vanish identically on the W state");
    const FilterValues u0 = filter_expectations(upsilon00(AnglePair{0.0, 0.0}));
    add("filters_ups_origin", 0.0, std::max({std::abs(u0.f1), std::abs(u0.f2), std::abs(u0.f3)}),
        1e-12, "filters vanish only at th = ph = 0");

    double dev = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double th = -1.2 + 0.6 * i;
        const double ph = -1.2 + 0.6 * j;
        const FilterValues f = filter_expectations(upsilon00(AnglePair{th, ph}));
        dev = std::max({dev, std::abs(f.f1 - f1_cf(th, ph)), std::abs(f.f2 - f2_cf(th, ph)),
                        std::abs(f.f3 - f3_cf(th, ph))});
      }
    add("filters_closed_forms", 0.0, dev, 1e-10,
        "filter contractions match their closed forms on the angle grid");
  }

  return checks;
}

int run_reproduce(RunConfig& config) {
  const auto checks = reproduce_checks();
  const int io = emit(config, render_checks(config, checks));
  if (io != 0) return io;
  const bool all = std::all_of(checks.begin(), checks.end(),
                               [](const CheckResult& c) { return c.passed; });
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

int run_scan(RunConfig& config, const std::string& family, double epsilon) {
  const std::vector<std::string> columns{"family",     "q_or_angle",
                                         "epsilon",    "gsf",
                                         "fidelity",   "negativity",
                                         "analytic_negativity", "residual", "note"};
  std::vector<std::vector<std::string>> rows;
  const std::size_t n = std::max<std::size_t>(config.grid_points, 2);

  auto push_row = [&](const std::string& fam, double x, double gsf_value, double neg,
                      double analytic, const std::string& note) {
    const double fid = 0.2 + 0.8 * gsf_value;
    rows.push_back({fam, fmt17(x), fmt17(epsilon), fmt17(gsf_value), fmt17(fid), fmt17(neg),
                    fmt17(analytic), fmt17(std::abs(neg - analytic)), note});
  };

  if (family == "iso") {
    const AnglePair ab{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double q = static_cast<double>(i) / static_cast<double>(n - 1);
      const Mat xi = iso_mixture(ab, q);
      const OptResult g = generalized_singlet_fraction(xi);
      const auto w = upsilon_weights(xi, g.argmax_angles);
      const double neg = output_negativity(w, epsilon);
      const double analytic = iso_neg_cf(q, epsilon);
      std::string note;
      if (analytic == 0.0 && std::abs(epsilon - kPi / 4.0) < 1e-12)
        note = "informational: negativity zero for all q <= 1/3 at eps = pi/4";
      push_row("iso", q, g.value, neg, analytic, note);
    }
  } else if (family == "gs") {
    const AnglePair ab{kPi / 4.0, kPi / 4.0};
    const AnglePair gd{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double q = static_cast<double>(i) / static_cast<double>(n - 1);
      const Mat xi = gs_mixture(ab, gd, q);
      const OptResult g = generalized_singlet_fraction(xi);
      const double ang = gs_angle(q);
      const auto w = upsilon_weights(xi, AnglePair{ang, ang});
      push_row("gs", q, g.value, output_negativity(w, epsilon), gs_neg_cf(q, epsilon), "");
    }
  } else if (family == "ghz") {
    const Mat ghz = named_state(NamedState::GHZ4);
    const OptResult g = generalized_singlet_fraction(ghz);
    for (std::size_t i = 0; i < n; ++i) {
      const double th = -kPi / 4.0 + kPi / 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      const auto w = upsilon_weights(ghz, AnglePair{th, 0.0});
      const double fid_gsf = ghz_overlap_cf(th);  // fidelity varies with the scan angle
      const double neg = output_negativity(w, epsilon);
      rows.push_back({"ghz", fmt17(th), fmt17(epsilon), fmt17(g.value),
                      fmt17(0.2 + 0.8 * fid_gsf), fmt17(neg), fmt17(ghz_neg_cf(th, epsilon)),
                      fmt17(std::abs(neg - ghz_neg_cf(th, epsilon))), ""});
    }
  } else if (family == "w") {
    const Mat w1 = named_state(NamedState::W1);
    const OptResult g = generalized_singlet_fraction(w1);
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = kPi / 4.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      const auto w = upsilon_weights(w1, AnglePair{0.0, ph});
      const double overlap = w_overlap_cf(0.0, ph);
      const double neg = output_negativity(w, epsilon);
      rows.push_back({"w", fmt17(ph), fmt17(epsilon), fmt17(g.value), fmt17(0.2 + 0.8 * overlap),
                      fmt17(neg), fmt17(w_neg_cf(ph, epsilon)),
                      fmt17(std::abs(neg - w_neg_cf(ph, epsilon))), ""});
    }
  } else {
    std::cerr << "error: unknown family: " << family << "\n";
    return 2;
  }

  std::ostringstream os;
  if (config.format == "json") {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(config);
    j["columns"] = columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) j["rows"].push_back(row);
    os << j.dump(2) << "\n";
  } else {
    write_table_csv(os, config, columns, rows);
  }
  return emit(config, os.str());
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

struct OracleSample {
  double oracle_vs_bichannel = 0.0;
  double prob_sum_dev = 0.0;
  double gram_trace_dev = 0.0;
  double trace_overlap_dev = 0.0;
};

OracleSample oracle_sample(RandomStream& rs) {
  OracleSample out;
  const std::size_t rank = 1 + static_cast<std::size_t>(rs.next_u64() % 16);
  const Mat xi = ginibre_density(16, rank, rs);
  const Vec psi_in = haar_pure(4, rs);
  const AnglePair a{(rs.uniform() - 0.5) * (kPi - 0.02), (rs.uniform() - 0.5) * (kPi - 0.02)};
  RecoverySet4 rec;
  for (auto& op : rec.operators) op = haar_unitary(4, rs);

  const ProtocolResult pr = protocol_oracle(xi, psi_in, a, rec);
  const Mat via_e1 = bichannel_E1(xi, outer(psi_in, psi_in), a, rec);
  out.oracle_vs_bichannel = max_abs_diff(pr.average, via_e1);

  double psum = 0.0;
  for (const auto& rec_out : pr.outcomes) psum += rec_out.probability;
  out.prob_sum_dev = std::abs(psum - 1.0);

  // Gram elements vs the coefficient-matrix trace formula.
  {
    const Mat gram = upsilon_gram(xi, a);
    const auto decomp = eigh(xi);
    const Mat s_rot = rotation_S(a.theta, a.phi);
    const Mat t0 = rotation_T(0.0, 0.0);
    const Mat st_inv = s_rot * transpose(t0);   // S T^{-1}
    const Mat ts_inv = t0 * transpose(s_rot);   // T S^{-1}
    Mat ref(16, 16);
    for (std::size_t lam = 0; lam < 16; ++lam) {
      if (decomp.values[lam] < 1e-12) continue;
      Vec v(16);
      for (std::size_t i = 0; i < 16; ++i) v[i] = decomp.vectors(i, lam);
      const Mat c = coefficient_matrix(v);
      const Mat left = c * st_inv;
      const Mat right = ts_inv * dagger(c);
      for (std::size_t ab = 0; ab < 16; ++ab)
        for (std::size_t cd = 0; cd < 16; ++cd) {
          const cplx t1 = trace(pauli_pairs()[ab] * left);
          const cplx t2 = trace(dagger(pauli_pairs()[cd]) * right);
          ref(ab, cd) += 0.25 * decomp.values[lam] * t1 * t2;
        }
    }
    out.gram_trace_dev = max_abs_diff(gram, ref);
  }

  // tr[R U^{ab dagger} U^{mn dagger}] = 4 <Ups00|(I x U^{mn dagger} R)|Ups^{ab}>
  {
    const Vec ups = upsilon00(a);
    double dev = 0.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int al = 0; al < 4; ++al)
          for (int be = 0; be < 4; ++be) {
            const Mat& rmn = rec.at(mu, nu);
            const cplx lhs =
                trace(rmn * dagger(pauli_pair(al, be)) * dagger(pauli_pair(mu, nu)));
            const Mat op = dagger(pauli_pair(mu, nu)) * rmn;
            Vec w(16, cplx{0.0, 0.0});
            const Vec upsab = upsilon(a, al, be);
            for (std::size_t reg = 0; reg < 4; ++reg)
              for (std::size_t b = 0; b < 4; ++b)
                for (std::size_t bp = 0; bp < 4; ++bp)
                  w[reg * 4 + b] += op(b, bp) * upsab[reg * 4 + bp];
            const cplx rhs = 4.0 * inner(ups, w);
            dev = std::max(dev, std::abs(lhs - rhs));
          }
    out.trace_overlap_dev = dev;
  }
  return out;
}

int run_oracle_check(RunConfig& config) {
  RandomStream root(config.seed);
  std::vector<OracleSample> slots(config.samples);
  parallel_for(config.samples, config.threads, [&](std::size_t k) {
    RandomStream sub = root.substream(k);
    slots[k] = oracle_sample(sub);
  });

  OracleSample worst;
  std::size_t first_bad = config.samples;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto& s = slots[k];
    worst.oracle_vs_bichannel = std::max(worst.oracle_vs_bichannel, s.oracle_vs_bichannel);
    worst.prob_sum_dev = std::max(worst.prob_sum_dev, s.prob_sum_dev);
    worst.gram_trace_dev = std::max(worst.gram_trace_dev, s.gram_trace_dev);
    worst.trace_overlap_dev = std::max(worst.trace_overlap_dev, s.trace_overlap_dev);
    const double m = std::max({s.oracle_vs_bichannel, s.prob_sum_dev, s.gram_trace_dev,
                               s.trace_overlap_dev});
    if (m > config.tolerance && first_bad == config.samples) first_bad = k;
  }

  std::vector<CheckResult> checks;
  checks.push_back(make_check("oracle_vs_bichannel", 0.0, worst.oracle_vs_bichannel,
                              config.tolerance,
                              "six-qubit simulation equals the bichannel form"));
  checks.push_back(make_check("outcome_prob_sum", 0.0, worst.prob_sum_dev, config.tolerance,
                              "measurement outcome probabilities sum to 1"));
  checks.push_back(make_check("gram_trace_identity", 0.0, worst.gram_trace_dev, config.tolerance,
                              "overlaps equal the coefficient-matrix trace formula"));
  checks.push_back(make_check("trace_overlap_identity", 0.0, worst.trace_overlap_dev,
                              config.tolerance,
                              "recovery traces equal 4x the Upsilon overlaps"));

  {
    RandomStream td = root.substream(0xABCDEF);
    const Mat a = haar_unitary(4, td);
    const Mat b = haar_unitary(4, td);
    const TwoDesignCheck c = haar_two_design_check(a, b, 20000, td);
    checks.push_back(make_check("haar_two_design", 0.0, std::abs(c.empirical - c.analytic),
                                4.0 * c.std_error,
                                "Haar average equals (tr A tr B + tr AB)/20"));
  }

  const int io = emit(config, render_checks(config, checks));
  if (io != 0) return io;
  const bool all = std::all_of(checks.begin(), checks.end(),
                               [](const CheckResult& c) { return c.passed; });
  if (!all) {
    if (first_bad < config.samples)
      std::cerr << "oracle-check: first failing sample " << first_bad << " (seed " << config.seed
                << ", substream " << first_bad << ")\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// conjecture
// ---------------------------------------------------------------------------

struct ConjectureSample {
  std::string sample_id;
  std::string resource_descriptor;
  double gsf = 0.0;
  double gsf_max = 0.0;
  double max_output_negativity = 0.0;
  double epsilon_at_max = 0.0;
  bool boundary = false;
};

ConjectureSample conjecture_eval(const std::string& id, const std::string& descriptor,
                                 const Mat& xi, RandomStream& rs, std::size_t eps_grid) {
  ConjectureSample s;
  s.sample_id = id;
  s.resource_descriptor = descriptor;

  const OptResult g = generalized_singlet_fraction(xi);
  s.gsf = g.value;

  GsfMaxOptions opt;
  opt.restarts = 6;
  opt.polish_evals = 300;
  opt.early_exit_above = MetricContext::conjecture_threshold + 1e-9;
  const OptResult gmax = max_generalized_singlet_fraction(xi, opt, rs);
  s.gsf_max = std::max(gmax.value, g.value);

  const auto w = upsilon_weights(xi, g.argmax_angles);
  for (std::size_t j = 0; j < eps_grid; ++j) {
    const double eps = kPi / 2.0 * static_cast<double>(j) / static_cast<double>(eps_grid - 1);
    const double n = output_negativity(w, eps);
    if (n > s.max_output_negativity) {
      s.max_output_negativity = n;
      s.epsilon_at_max = eps;
    }
  }
  return s;
}

int run_conjecture(RunConfig& config, const std::string& sampler) {
  RandomStream root(config.seed);
  const std::size_t eps_grid = std::max<std::size_t>(config.grid_points, 2);

  std::vector<ConjectureSample> results(config.samples + 1);
  {
    RandomStream boundary_rs = root.substream(0x534D4F);  // the Smolin boundary case
    results[0] = conjecture_eval("boundary", "smolin", named_state(NamedState::Smolin),
                                 boundary_rs, eps_grid);
    results[0].boundary = true;
  }

  parallel_for(config.samples, config.threads, [&](std::size_t k) {
    RandomStream rs = root.substream(k);
    Mat xi;
    std::string descriptor;
    if (sampler == "ginibre") {
      const std::size_t rank = 1 + static_cast<std::size_t>(rs.next_u64() % 16);
      xi = ginibre_density(16, rank, rs);
      descriptor = "ginibre(rank=" + std::to_string(rank) + ")";
    } else if (sampler == "ups_mixture") {
      const std::size_t m = 1 + static_cast<std::size_t>(rs.next_u64() % 4);
      std::vector<double> p(m);
      double tot = 0.0;
      for (auto& v : p) {
        v = rs.uniform_pos();
        tot += v;
      }
      xi = Mat(16, 16);
      for (std::size_t c = 0; c < m; ++c) {
        const AnglePair a{(rs.uniform() - 0.5) * (kPi - 0.02),
                          (rs.uniform() - 0.5) * (kPi - 0.02)};
        const Vec v = upsilon00(a);
        xi = xi + outer(v, v) * cplx{p[c] / tot, 0.0};
      }
      descriptor = "ups_mixture(m=" + std::to_string(m) + ")";
    } else {  // smolin_mixture
      const std::size_t m = 1 + static_cast<std::size_t>(rs.next_u64() % 3);
      std::vector<double> p(m);
      double tot = 0.0;
      for (auto& v : p) {
        v = rs.uniform_pos();
        tot += v;
      }
      xi = Mat(16, 16);
      for (std::size_t c = 0; c < m; ++c) {
        const AnglePair a{(rs.uniform() - 0.5) * (kPi - 0.02),
                          (rs.uniform() - 0.5) * (kPi - 0.02)};
        xi = xi + generalized_smolin(a) * cplx{p[c] / tot, 0.0};
      }
      descriptor = "smolin_mixture(m=" + std::to_string(m) + ")";
    }
    results[k + 1] = conjecture_eval(std::to_string(k), descriptor, xi, rs, eps_grid);
  });

  std::size_t candidates = 0, counterexamples = 0;
  std::vector<std::string> counter_ids;
  for (const auto& s : results) {
    if (s.boundary) continue;
    if (s.gsf_max <= MetricContext::conjecture_threshold + 1e-9) {
      ++candidates;
      if (s.max_output_negativity > config.tolerance) {
        ++counterexamples;
        counter_ids.push_back(s.sample_id);
      }
    }
  }

  std::ostringstream os;
  if (config.format == "json") {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(config);
    j["sampler"] = sampler;
    j["samples"] = nlohmann::ordered_json::array();
    for (const auto& s : results) {
      nlohmann::ordered_json e;
      e["sample_id"] = s.sample_id;
      e["resource_descriptor"] = s.resource_descriptor;
      e["gsf"] = fmt17(s.gsf);
      e["gsf_max"] = fmt17(s.gsf_max);
      e["max_output_negativity"] = fmt17(s.max_output_negativity);
      e["epsilon_at_max"] = fmt17(s.epsilon_at_max);
      e["boundary"] = s.boundary;
      j["samples"].push_back(e);
    }
    j["summary"] = {{"drawn", config.samples},
                    {"candidates_below_quarter", candidates},
                    {"counterexamples", counterexamples},
                    {"counterexample_ids", counter_ids}};
    os << j.dump(2) << "\n";
  } else {
    std::vector<std::string> columns{"sample_id", "resource_descriptor", "gsf", "gsf_max",
                                     "max_output_negativity", "epsilon_at_max", "boundary"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : results)
      rows.push_back({s.sample_id, s.resource_descriptor, fmt17(s.gsf), fmt17(s.gsf_max),
                      fmt17(s.max_output_negativity), fmt17(s.epsilon_at_max),
                      s.boundary ? "true" : "false"});
    write_table_csv(os, config, columns, rows);
    os << "# summary: drawn=" << config.samples << " candidates_below_quarter=" << candidates
       << " counterexamples=" << counterexamples;
    if (!counter_ids.empty()) {
      os << " ids=";
      for (std::size_t i = 0; i < counter_ids.size(); ++i)
        os << counter_ids[i] << (i + 1 < counter_ids.size() ? ";" : "");
    }
    os << "\n";
  }
  return emit(config, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teleportation resource diagnostics"};
  app.set_version_flag("--version", std::string("qteleport-lab ") + kVersion);

  RunConfig config;
  config.threads = 1;
  std::string family = "iso";
  std::string sampler = "ginibre";
  double epsilon = kPi / 4.0;

  auto add_shared = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "RNG seed");
    cmd->add_option("--samples", config.samples, "number of random samples");
    cmd->add_option("--grid", config.grid_points, "grid points per swept axis");
    cmd->add_option("--tol", config.tolerance, "check tolerance");
    cmd->add_option("--out", config.output_path, "output file (default stdout)");
    cmd->add_option("--format", config.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", config.threads, "worker threads");
  };

  CLI::App* reproduce = app.add_subcommand("reproduce", "run the fixed reproduction check list");
  add_shared(reproduce);
  CLI::App* scan = app.add_subcommand("scan", "sweep an example family into a table");
  add_shared(scan);
  scan->add_option("--family", family, "iso, gs, ghz, or w")
      ->check(CLI::IsMember({"iso", "gs", "ghz", "w"}));
  scan->add_option("--epsilon", epsilon, "input-state angle");
  CLI::App* oracle = app.add_subcommand("oracle-check", "random-instance oracle equivalences");
  add_shared(oracle);
  CLI::App* conjecture = app.add_subcommand("conjecture", "scan resources near gsf <= 1/4");
  add_shared(conjecture);
  conjecture->add_option("--sampler", sampler, "ginibre, ups_mixture, or smolin_mixture")
      ->check(CLI::IsMember({"ginibre", "ups_mixture", "smolin_mixture"}));

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (reproduce->parsed()) {
      config.command = "reproduce";
      return run_reproduce(config);
    }
    if (scan->parsed()) {
      config.command = "scan";
      if (config.grid_points < 2) {
        std::cerr << "error: --grid must be at least 2\n";
        return 2;
      }
      return run_scan(config, family, epsilon);
    }
    if (oracle->parsed()) {
      config.command = "oracle-check";
      if (config.samples < 1) {
        std::cerr << "error: --samples must be at least 1\n";
        return 2;
      }
      return run_oracle_check(config);
    }
    config.command = "conjecture";
    return run_conjecture(config, sampler);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
