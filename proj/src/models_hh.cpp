#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdmp/errors.hpp"
#include "pdmp/models.hpp"

namespace pdmp {

namespace {

// z / (e^z - 1) with the removable singularity evaluated by its limit.
double rate_ratio(double z) { return z == 0.0 ? 1.0 : z / std::expm1(z); }

// Kinetic scheme edges. States 1..8 are the Na channel (8 is conducting),
// 9..13 the K channel (13 is conducting). Rate ids: 0 a_m, 1 b_m, 2 a_h,
// 3 b_h, 4 a_n, 5 b_n. The enumeration order below is the fixed indexing of
// the jump heights: Na m-forward, m-backward, h-down, h-up, then K forward,
// K backward.
struct Edge {
  int from;  // 1-based state label
  int to;
  int mult;
  int rate;
};

constexpr std::array<Edge, 28> kEdges = {{
    // Na: a_m forward
    {1, 2, 3, 0}, {2, 3, 2, 0}, {3, 4, 1, 0},
    {5, 6, 3, 0}, {6, 7, 2, 0}, {7, 8, 1, 0},
    // Na: b_m backward
    {2, 1, 1, 1}, {3, 2, 2, 1}, {4, 3, 3, 1},
    {6, 5, 1, 1}, {7, 6, 2, 1}, {8, 7, 3, 1},
    // Na: a_h (states 1-4 -> 5-8)
    {1, 5, 1, 2}, {2, 6, 1, 2}, {3, 7, 1, 2}, {4, 8, 1, 2},
    // Na: b_h (states 5-8 -> 1-4)
    {5, 1, 1, 3}, {6, 2, 1, 3}, {7, 3, 1, 3}, {8, 4, 1, 3},
    // K: a_n forward
    {9, 10, 4, 4}, {10, 11, 3, 4}, {11, 12, 2, 4}, {12, 13, 1, 4},
    // K: b_n backward
    {10, 9, 1, 5}, {11, 10, 2, 5}, {12, 11, 3, 5}, {13, 12, 4, 5},
}};

double rate_by_id(const HHRates& r, int id) {
  switch (id) {
    case 0: return r.a_m;
    case 1: return r.b_m;
    case 2: return r.a_h;
    case 3: return r.b_h;
    case 4: return r.a_n;
    default: return r.b_n;
  }
}

// Instantaneous jump rate in the matrix form
//   lambda = (a_m b_m a_h b_h) M_Na theta_Na + (a_n b_n) M_K theta_K.
double hh_lambda(const HHRates& r, std::span<const double> theta) {
  const double am_occ = 3.0 * theta[0] + 2.0 * theta[1] + theta[2] +
                        3.0 * theta[4] + 2.0 * theta[5] + theta[6];
  const double bm_occ = theta[1] + 2.0 * theta[2] + 3.0 * theta[3] +
                        theta[5] + 2.0 * theta[6] + 3.0 * theta[7];
  const double ah_occ = theta[0] + theta[1] + theta[2] + theta[3];
  const double bh_occ = theta[4] + theta[5] + theta[6] + theta[7];
  const double an_occ = 4.0 * theta[8] + 3.0 * theta[9] + 2.0 * theta[10] + theta[11];
  const double bn_occ = theta[9] + 2.0 * theta[10] + 3.0 * theta[11] + 4.0 * theta[12];
  return r.a_m * am_occ + r.b_m * bm_occ + r.a_h * ah_occ + r.b_h * bh_occ +
         r.a_n * an_occ + r.b_n * bn_occ;
}

double binomial_coeff(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

// Deterministic rounding of n * p to integers summing exactly to n.
std::vector<double> largest_remainder(const std::vector<double>& p, int n) {
  std::vector<double> counts(p.size());
  std::vector<std::pair<double, std::size_t>> rema(p.size());
  int assigned = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double exact = p[i] * n;
    counts[i] = std::floor(exact);
    assigned += static_cast<int>(counts[i]);
    rema[i] = {exact - counts[i], i};
  }
  std::stable_sort(rema.begin(), rema.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; r < n - assigned; ++r) counts[rema[static_cast<std::size_t>(r)].second] += 1.0;
  return counts;
}

}  // namespace

HHParams HHParams::defaults(HHSet set) {
  HHParams p;
  if (set == HHSet::P1) {
    p.e_na = 115.0;
    p.e_k = -12.0;
    p.e_l = 0.0;
    p.g_na = 4.0;
    p.g_k = 18.0;
    p.g_l = 0.3;
    p.c = 1.0;
    p.n_na = 300;
    p.n_k = 30;
    p.input_amplitude = 30.0;
    p.input_on = 1.0;
    p.input_off = 2.0;
  } else {
    p.e_na = 144.0;
    p.e_k = 0.0;
    p.e_l = 0.0;
    p.g_na = 2.569e-5;
    p.g_k = 0.0;
    p.g_l = 1.0 / 1953.49e3;
    p.c = 0.0714e-6;
    p.n_na = 1000;
    p.n_k = 0;
    p.input_amplitude = 35.1e-6;
    p.input_on = 0.1;
    p.input_off = 0.2;
  }
  return p;
}

HHRates hh_rates(HHSet set, double y) {
  HHRates r;
  if (set == HHSet::P1) {
    r.a_n = 0.1 * rate_ratio((10.0 - y) / 10.0);
    r.a_m = rate_ratio((25.0 - y) / 10.0);
    r.a_h = 0.07 * std::exp(-y / 20.0);
    r.b_n = 0.125 * std::exp(-y / 80.0);
    r.b_m = 4.0 * std::exp(-y / 18.0);
    r.b_h = 1.0 / (std::exp((30.0 - y) / 10.0) + 1.0);
  } else {
    r.a_m = 1.872 * 6.06 * rate_ratio((25.41 - y) / 6.06);
    r.a_h = 0.549 * 9.06 * rate_ratio((y + 27.74) / 9.06);
    r.b_m = 3.973 * 9.41 * rate_ratio((y - 21.001) / 9.41);
    r.b_h = 22.57 / (1.0 + std::exp((56.0 - y) / 12.5));
    r.a_n = 0.0;
    r.b_n = 0.0;
  }
  return r;
}

std::vector<double> hh_initial_theta(const HHParams& params, HHSet set) {
  const HHRates r = hh_rates(set, 0.0);
  const double m_bar = r.a_m / (r.a_m + r.b_m);
  const double h_bar = r.a_h / (r.a_h + r.b_h);

  std::vector<double> theta(13, 0.0);
  if (params.n_na > 0) {
    std::vector<double> p(8);
    for (int k = 0; k < 4; ++k) {
      const double binom = binomial_coeff(3, k) * std::pow(m_bar, k) *
                           std::pow(1.0 - m_bar, 3 - k);
      p[static_cast<std::size_t>(k)] = binom * (1.0 - h_bar);      // states 1..4
      p[static_cast<std::size_t>(k + 4)] = binom * h_bar;          // states 5..8
    }
    const std::vector<double> counts = largest_remainder(p, params.n_na);
    for (int i = 0; i < 8; ++i) theta[static_cast<std::size_t>(i)] = counts[static_cast<std::size_t>(i)];
  }
  if (params.n_k > 0) {
    const double n_bar = r.a_n / (r.a_n + r.b_n);
    std::vector<double> p(5);
    for (int k = 0; k < 5; ++k)
      p[static_cast<std::size_t>(k)] =
          binomial_coeff(4, k) * std::pow(n_bar, k) * std::pow(1.0 - n_bar, 4 - k);
    const std::vector<double> counts = largest_remainder(p, params.n_k);
    for (int i = 0; i < 5; ++i) theta[static_cast<std::size_t>(8 + i)] = counts[static_cast<std::size_t>(i)];
  }
  return theta;
}

PdmpModel build_hh_model(const HHParams& params, HHSet set) {
  if (params.n_na + params.n_k < 1)
    throw ModelError("build_hh_model: at least one channel is required");
  if (!(params.c > 0.0)) throw ModelError("build_hh_model: capacitance must be positive");
  if (params.n_na < 0 || params.n_k < 0)
    throw ModelError("build_hh_model: channel counts must be non-negative");

  PdmpModel model;
  model.id = set == HHSet::P1 ? "hh-p1" : "hh-p2";
  model.dim_d = 1;
  model.dim_m = 13;
  model.theta_piecewise_constant = true;

  const HHParams p = params;

  auto input_at = [p](double t) {
    return (t > p.input_on && t <= p.input_off) ? p.input_amplitude : 0.0;
  };

  model.flow = [p, input_at](std::span<const double> x, double t,
                             std::span<double> dxdt) {
    const double y = x[0];
    std::span<const double> theta = x.subspan(1);
    dxdt[0] = (-p.g_na * theta[7] * (y - p.e_na) - p.g_k * theta[12] * (y - p.e_k) -
               p.g_l * (y - p.e_l) + input_at(t)) /
              p.c;
    std::fill(dxdt.begin() + 1, dxdt.end(), 0.0);
  };

  model.intensity = [set](std::span<const double> x, double /*t*/) {
    const HHRates r = hh_rates(set, x[0]);
    return hh_lambda(r, x.subspan(1));
  };

  DiscreteKernel kernel;
  kernel.heights = [set](const PdmpState& state) {
    const HHRates r = hh_rates(set, state.y[0]);
    std::array<double, 28> weights{};
    double total = 0.0;
    for (std::size_t e = 0; e < kEdges.size(); ++e) {
      const Edge& edge = kEdges[e];
      weights[e] = static_cast<double>(edge.mult) * rate_by_id(r, edge.rate) *
                   state.theta[static_cast<std::size_t>(edge.from - 1)];
      total += weights[e];
    }
    std::vector<WeightedHeight> out;
    out.reserve(kEdges.size());
    for (std::size_t e = 0; e < kEdges.size(); ++e) {
      const Edge& edge = kEdges[e];
      WeightedHeight wh;
      wh.height.assign(14, 0.0);
      wh.height[static_cast<std::size_t>(edge.from)] = -1.0;  // theta offset is 1
      wh.height[static_cast<std::size_t>(edge.to)] = 1.0;
      wh.probability = weights[e] / total;
      out.push_back(std::move(wh));
    }
    return out;
  };
  model.kernel = kernel;

  if (params.input_amplitude != 0.0)
    model.input_breakpoints = {params.input_on, params.input_off};

  model.initial_state.y = {0.0};
  model.initial_state.theta = hh_initial_theta(params, set);

  // Declared intensity floor: per-y lower bound N * min over channel states
  // of the per-channel exit-rate sum, minimized over a potential sweep.
  {
    double floor = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      const double y = -50.0 + 200.0 * i / 2000.0;
      const HHRates r = hh_rates(set, y);
      const std::array<double, 8> na_exit = {
          3 * r.a_m + r.a_h,           2 * r.a_m + r.b_m + r.a_h,
          r.a_m + 2 * r.b_m + r.a_h,   3 * r.b_m + r.a_h,
          3 * r.a_m + r.b_h,           2 * r.a_m + r.b_m + r.b_h,
          r.a_m + 2 * r.b_m + r.b_h,   3 * r.b_m + r.b_h};
      const std::array<double, 5> k_exit = {4 * r.a_n, 3 * r.a_n + r.b_n,
                                            2 * r.a_n + 2 * r.b_n,
                                            r.a_n + 3 * r.b_n, 4 * r.b_n};
      double bound = params.n_na * *std::min_element(na_exit.begin(), na_exit.end());
      if (params.n_k > 0)
        bound += params.n_k * *std::min_element(k_exit.begin(), k_exit.end());
      floor = std::min(floor, bound);
    }
    model.lambda_floor = floor;
  }

  const int n_na = params.n_na;
  const int n_k = params.n_k;
  model.contains = [n_na, n_k](const PdmpState& s) {
    if (!std::isfinite(s.y[0])) return false;
    double sum_na = 0.0, sum_k = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double v = s.theta[static_cast<std::size_t>(i)];
      if (v < 0.0 || v != std::floor(v)) return false;
      sum_na += v;
    }
    for (int i = 8; i < 13; ++i) {
      const double v = s.theta[static_cast<std::size_t>(i)];
      if (v < 0.0 || v != std::floor(v)) return false;
      sum_k += v;
    }
    return sum_na == n_na && sum_k == n_k;
  };

  return model;
}

}  // namespace pdmp
