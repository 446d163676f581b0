#include "dropkit/cell_integral.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>
#include <vector>

#include "dropkit/errors.hpp"
#include "dropkit/numerics.hpp"

namespace dropkit {

namespace {

constexpr int kFaceNodes = 40;

double compute_cell_pair_integral(int dimension, double q) {
  if (q == 0.0) {
    return 1.0;
  }
  const int face_dim = dimension - 1;
  const auto rule = numerics::gauss_legendre(kFaceNodes);
  // map rule to [0,1]
  std::vector<double> x(kFaceNodes);
  std::vector<double> w(kFaceNodes);
  for (int i = 0; i < kFaceNodes; ++i) {
    x[i] = 0.5 * (rule.nodes[i] + 1.0);
    w[i] = 0.5 * rule.weights[i];
  }

  std::vector<int> idx(face_dim, 0);
  std::vector<double> poly;
  double total = 0.0;
  const auto points = static_cast<long>(std::pow(kFaceNodes, face_dim));
  for (long p = 0; p < points; ++p) {
    long rest = p;
    double weight = 1.0;
    double norm2 = 1.0;
    // coefficients of (1 - t) prod_i (1 - t w_i)
    poly.assign(dimension + 1, 0.0);
    poly[0] = 1.0;
    poly[1] = -1.0;
    int degree = 1;
    for (int d = 0; d < face_dim; ++d) {
      const int k = static_cast<int>(rest % kFaceNodes);
      rest /= kFaceNodes;
      weight *= w[k];
      norm2 += x[k] * x[k];
      for (int j = degree + 1; j >= 1; --j) {
        poly[j] -= x[k] * poly[j - 1];
      }
      ++degree;
    }
    double radial = 0.0;
    for (int j = 0; j <= degree; ++j) {
      radial += poly[j] / (dimension - q + j);
    }
    total += weight * std::pow(norm2, -0.5 * q) * radial;
  }
  return std::ldexp(1.0, dimension) * dimension * total;
}

struct Cache {
  std::mutex mutex;
  std::map<std::pair<int, double>, double> values;
  bool loaded = false;
};

Cache& cache() {
  static Cache instance;
  return instance;
}

std::filesystem::path cache_file() {
  const char* dir = std::getenv("DROPKIT_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') {
    return {};
  }
  return std::filesystem::path(dir) / "cell_integrals.txt";
}

void load_cache_locked(Cache& c) {
  c.loaded = true;
  const auto path = cache_file();
  if (path.empty()) {
    return;
  }
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int n = 0;
    double q = 0.0;
    double v = 0.0;
    if (ls >> n >> q >> v && std::isfinite(v)) {
      c.values[{n, q}] = v;
    }
  }
}

void persist_locked(int dimension, double q, double value) {
  const auto path = cache_file();
  if (path.empty()) {
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::app);
  if (out) {
    out << std::setprecision(17) << dimension << ' ' << q << ' ' << value << '\n';
  }
}

double cdf_recursive(int dimension, double r, int nodes) {
  if (r <= 0.0) {
    return 0.0;
  }
  if (r * r >= dimension) {
    return 1.0;
  }
  if (dimension == 1) {
    return r >= 1.0 ? 1.0 : 1.0 - (1.0 - r) * (1.0 - r);
  }
  // one coordinate gap a has density 2(1-a) on [0,1]; the rest must fit in sqrt(r^2-a^2)
  const double upper = std::min(1.0, r);
  std::vector<double> breaks{0.0};
  for (int k = dimension - 1; k >= 1; --k) {
    const double rem = r * r - k;
    if (rem > 0.0) {
      const double a = std::sqrt(rem);
      if (a > 0.0 && a < upper) {
        breaks.push_back(a);
      }
    }
  }
  breaks.push_back(upper);
  const auto integrand = [&](double a) {
    return 2.0 * (1.0 - a) * cdf_recursive(dimension - 1, std::sqrt(std::max(0.0, r * r - a * a)), nodes);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += numerics::tanh_sinh(integrand, breaks[i], breaks[i + 1], nodes);
  }
  return total;
}

}  // namespace

double unit_cell_pair_integral(int dimension, double q) {
  if (dimension < 1) {
    throw ParameterError("unit_cell_pair_integral: dimension must be >= 1");
  }
  if (!(q < dimension)) {
    throw ParameterError("unit_cell_pair_integral: exponent must be < N");
  }
  Cache& c = cache();
  std::lock_guard lock(c.mutex);
  if (!c.loaded) {
    load_cache_locked(c);
  }
  const auto key = std::make_pair(dimension, q);
  if (auto it = c.values.find(key); it != c.values.end()) {
    return it->second;
  }
  const double value = compute_cell_pair_integral(dimension, q);
  if (!std::isfinite(value)) {
    throw NumericError("unit cell pair integral is not finite");
  }
  c.values[key] = value;
  persist_locked(dimension, q, value);
  return value;
}

double unit_cell_self_energy(int dimension, double lambda) {
  return 0.5 * unit_cell_pair_integral(dimension, lambda);
}

double unit_cell_distance_cdf(int dimension, double r, int nodes_per_piece) {
  if (dimension < 1) {
    throw ParameterError("unit_cell_distance_cdf: dimension must be >= 1");
  }
  return cdf_recursive(dimension, r, nodes_per_piece);
}

}  // namespace dropkit
