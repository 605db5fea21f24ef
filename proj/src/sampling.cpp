#include "taildep/sampling.hpp"

#include <cmath>

#include "taildep/errors.hpp"

namespace taildep {

namespace {

// Fills out[0..k) with standard normals via Box-Muller pairs.
void draw_normals(CounterRng& rng, int k, double* out) {
  for (int j = 0; j < k; j += 2) {
    const double u1 = rng.next_open_uniform();
    const double u2 = rng.next_uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586 * u2;
    out[j] = rad * std::cos(ang);
    if (j + 1 < k) out[j + 1] = rad * std::sin(ang);
  }
}

// One unit direction into out[0..k).
void draw_direction(CounterRng& row_rng, int k, double* out) {
  for (;;) {
    draw_normals(row_rng, k, out);
    double norm2 = 0.0;
    for (int j = 0; j < k; ++j) norm2 += out[j] * out[j];
    const double norm = std::sqrt(norm2);
    if (norm >= 1e-12) {
      for (int j = 0; j < k; ++j) out[j] /= norm;
      return;
    }
  }
}

}  // namespace

Matrix sample_sphere(int k, int n, const CounterRng& rng) {
  if (k < 2 || n < 1) throw DomainError("sample_sphere: need k >= 2, n >= 1");
  Matrix out(n, k);
  std::vector<double> row(k);
  for (int i = 0; i < n; ++i) {
    CounterRng row_rng = rng.fork(static_cast<std::uint64_t>(i));
    draw_direction(row_rng, k, row.data());
    for (int j = 0; j < k; ++j) out(i, j) = row[j];
  }
  return out;
}

SampleMatrix sample_elliptical(const EllipticalModel& model, int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_elliptical: need n >= 1");
  const int k = model.dim();
  const Matrix& L = model.sigma.chol();

  SampleMatrix out;
  out.n = n;
  out.k = k;
  out.seed = seed;
  out.model = model.radial.describe();
  out.data.assign(static_cast<std::size_t>(n) * k, 0.0);

  const CounterRng master(seed);
  std::vector<double> dir(k);
  for (int i = 0; i < n; ++i) {
    CounterRng row_rng = master.fork(static_cast<std::uint64_t>(i));
    draw_direction(row_rng, k, dir.data());
    const double r = model.radial.quantile(row_rng.next_open_uniform());
    for (int row = 0; row < k; ++row) {
      double c = 0.0;
      for (int col = 0; col <= row; ++col) c += L(row, col) * dir[col];
      out.data[static_cast<std::size_t>(i) * k + row] = r * c;
    }
  }
  return out;
}

}  // namespace taildep
