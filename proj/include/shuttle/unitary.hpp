#pragma once

#include "shuttle/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace shuttle {

using cplx = std::complex<double>;

/// Small dense row-major complex matrix; only used for 1-2 qubit checks.
class CMatrix {
public:
  explicit CMatrix(std::size_t dim = 0) : dim_(dim), data_(dim * dim) {}

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      m(i, i) = 1.0;
    }
    return m;
  }

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const cplx aik = a(i, k);
        for (std::size_t j = 0; j < a.dim_; ++j) {
          out(i, j) += aik * b(k, j);
        }
      }
    }
    return out;
  }

  CMatrix adjoint() const {
    CMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        out(j, i) = std::conj((*this)(i, j));
      }
    }
    return out;
  }

private:
  std::size_t dim_;
  std::vector<cplx> data_;
};

inline CMatrix single_qubit_matrix(const Gate& g) {
  using std::numbers::pi;
  const double s = 1.0 / std::numbers::sqrt2;
  const cplx i{0.0, 1.0};
  CMatrix m(2);
  auto set = [&](cplx a, cplx b, cplx c, cplx d) {
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
  };
  auto rz = [&](double t) {
    set(std::exp(-i * (t / 2)), 0.0, 0.0, std::exp(i * (t / 2)));
  };
  switch (g.kind) {
  case GateKind::H: set(s, s, s, -s); break;
  case GateKind::X: set(0.0, 1.0, 1.0, 0.0); break;
  case GateKind::Y: set(0.0, -i, i, 0.0); break;
  case GateKind::Z: set(1.0, 0.0, 0.0, -1.0); break;
  case GateKind::S: set(1.0, 0.0, 0.0, i); break;
  case GateKind::Sdg: set(1.0, 0.0, 0.0, -i); break;
  case GateKind::T: set(1.0, 0.0, 0.0, std::exp(i * (pi / 4))); break;
  case GateKind::Tdg: set(1.0, 0.0, 0.0, std::exp(-i * (pi / 4))); break;
  case GateKind::RX: {
    const double t = *g.angle;
    set(std::cos(t / 2), -i * std::sin(t / 2), -i * std::sin(t / 2), std::cos(t / 2));
    break;
  }
  case GateKind::RY: {
    const double t = *g.angle;
    set(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2));
    break;
  }
  case GateKind::RZ: rz(*g.angle); break;
  default: throw std::invalid_argument("not a single-qubit unitary gate");
  }
  return m;
}

/// Embeds the gate into an n-qubit operator. Qubit 0 is the most significant
/// bit of the basis index.
inline CMatrix embed(const Gate& g, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  auto bit = [n](std::size_t index, std::size_t q) {
    return (index >> (n - 1 - q)) & 1U;
  };
  CMatrix out(dim);
  if (g.kind == GateKind::BARRIER) {
    return CMatrix::identity(dim);
  }
  if (!is_two_qubit(g.kind)) {
    const CMatrix u = single_qubit_matrix(g);
    const std::size_t q = g.qubits[0];
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        if ((r ^ c) & ~(std::size_t{1} << (n - 1 - q)) & (dim - 1)) {
          continue;
        }
        out(r, c) = u(bit(r, q), bit(c, q));
      }
    }
    return out;
  }
  const std::size_t a = g.qubits[0];
  const std::size_t b = g.qubits[1];
  for (std::size_t c = 0; c < dim; ++c) {
    const auto ba = bit(c, a);
    const auto bb = bit(c, b);
    switch (g.kind) {
    case GateKind::CZ: out(c, c) = (ba && bb) ? -1.0 : 1.0; break;
    case GateKind::CX: {
      const std::size_t r = ba ? c ^ (std::size_t{1} << (n - 1 - b)) : c;
      out(r, c) = 1.0;
      break;
    }
    case GateKind::SWAP: {
      std::size_t r = c;
      if (ba != bb) {
        r ^= (std::size_t{1} << (n - 1 - a)) | (std::size_t{1} << (n - 1 - b));
      }
      out(r, c) = 1.0;
      break;
    }
    default: break;
    }
  }
  return out;
}

/// Product of the gate unitaries, first gate applied first.
inline CMatrix unitary_of(std::span<const Gate> gates, std::size_t n) {
  if (n > 2) {
    throw std::invalid_argument("unitary_of supports at most 2 qubits");
  }
  if (n == 0) {
    throw std::invalid_argument("unitary_of needs at least one qubit");
  }
  CMatrix u = CMatrix::identity(std::size_t{1} << n);
  for (const auto& g : gates) {
    if (g.kind == GateKind::MEASURE) {
      throw std::invalid_argument("measure has no unitary");
    }
    check_gate(g, n);
    u = embed(g, n) * u;
  }
  return u;
}

/// Max-norm distance between `a` and `b` after removing the best global phase.
inline double distance_up_to_phase(const CMatrix& a, const CMatrix& b) {
  // Align phases on the largest-magnitude entry of b.
  std::size_t br = 0, bc = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < b.dim(); ++r) {
    for (std::size_t c = 0; c < b.dim(); ++c) {
      if (std::abs(b(r, c)) > best) {
        best = std::abs(b(r, c));
        br = r;
        bc = c;
      }
    }
  }
  cplx phase = 1.0;
  if (std::abs(a(br, bc)) > 0.0) {
    phase = (b(br, bc) / a(br, bc));
    phase /= std::abs(phase);
  }
  double err = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t c = 0; c < a.dim(); ++c) {
      err = std::max(err, std::abs(a(r, c) * phase - b(r, c)));
    }
  }
  return err;
}

} // namespace shuttle
