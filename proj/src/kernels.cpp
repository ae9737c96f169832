#include "mqpt/kernels.hpp"

namespace mqpt::kernels {

namespace {
// Engage threads only when there is enough arithmetic to amortize the fork.
// Desk-scale problems (dS=2..4) mostly stay below this and run inline.
constexpr std::size_t kGrain = 1u << 15;
}  // namespace

void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t n, std::size_t k,
            std::size_t m) {
  const std::size_t work = n * k * m;
#pragma omp parallel for schedule(static) if (work >= kGrain)
  for (std::size_t r = 0; r < n; ++r) {
    cplx* row = out + r * m;
    for (std::size_t c = 0; c < m; ++c) row[c] = cplx(0.0, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const cplx av = a[r * k + i];
      const cplx* brow = b + i * m;
      for (std::size_t c = 0; c < m; ++c) row[c] += av * brow[c];
    }
  }
}

void kron(const cplx* a, std::size_t ra, std::size_t ca, const cplx* b, std::size_t rb,
          std::size_t cb, cplx* out) {
  const std::size_t cols = ca * cb;
#pragma omp parallel for collapse(2) schedule(static) if (ra * ca * rb * cb >= kGrain)
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t k2 = 0; k2 < rb; ++k2) {
      const std::size_t row = i * rb + k2;
      for (std::size_t j = 0; j < ca; ++j) {
        const cplx av = a[i * ca + j];
        for (std::size_t l = 0; l < cb; ++l) out[row * cols + j * cb + l] = av * b[k2 * cb + l];
      }
    }
  }
}

void partial_trace_first(const cplx* m, std::size_t dA, std::size_t dB, cplx* out) {
  const std::size_t d = dA * dB;
#pragma omp parallel for collapse(2) schedule(static) if (dA * dA * dB >= kGrain)
  for (std::size_t r = 0; r < dA; ++r) {
    for (std::size_t s = 0; s < dA; ++s) {
      cplx acc(0.0, 0.0);
      for (std::size_t b = 0; b < dB; ++b) acc += m[(r * dB + b) * d + (s * dB + b)];
      out[r * dA + s] = acc;
    }
  }
}

void partial_trace_second(const cplx* m, std::size_t dA, std::size_t dB, cplx* out) {
  const std::size_t d = dA * dB;
#pragma omp parallel for collapse(2) schedule(static) if (dB * dB * dA >= kGrain)
  for (std::size_t a = 0; a < dB; ++a) {
    for (std::size_t b = 0; b < dB; ++b) {
      cplx acc(0.0, 0.0);
      for (std::size_t r = 0; r < dA; ++r) acc += m[(r * dB + a) * d + (r * dB + b)];
      out[a * dB + b] = acc;
    }
  }
}

void build_mmap(const cplx* u, const cplx* rho, std::size_t dS, std::size_t dE, cplx* out) {
  const std::size_t d3 = dS * dS * dS;
  const std::size_t dj = dS * dE;
  const std::size_t work = d3 * d3 * dE * dE * dE;
#pragma omp parallel for collapse(2) schedule(static) if (work >= kGrain)
  for (std::size_t row = 0; row < d3; ++row) {
    for (std::size_t col = 0; col < d3; ++col) {
      const std::size_t r = row / (dS * dS);
      const std::size_t rp = (row / dS) % dS;
      const std::size_t rpp = row % dS;
      const std::size_t s = col / (dS * dS);
      const std::size_t sp = (col / dS) % dS;
      const std::size_t spp = col % dS;
      cplx acc(0.0, 0.0);
      for (std::size_t e = 0; e < dE; ++e) {
        const cplx* urow = u + (r * dE + e) * dj;
        const cplx* vrow = u + (s * dE + e) * dj;
        for (std::size_t a = 0; a < dE; ++a) {
          const cplx ua = urow[rp * dE + a];
          const cplx* rrow = rho + (rpp * dE + a) * dj;
          cplx inner(0.0, 0.0);
          for (std::size_t b = 0; b < dE; ++b)
            inner += rrow[spp * dE + b] * std::conj(vrow[sp * dE + b]);
          acc += ua * inner;
        }
      }
      out[row * d3 + col] = acc;
    }
  }
}

void contract_super(const cplx* t, const cplx* a, cplx* q, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
#pragma omp parallel for collapse(2) schedule(static) if (d2 * d2 * d2 >= kGrain)
  for (std::size_t r = 0; r < dS; ++r) {
    for (std::size_t s = 0; s < dS; ++s) {
      cplx acc(0.0, 0.0);
      for (std::size_t k1 = 0; k1 < d2; ++k1) {
        const cplx* trow = t + (r * d2 + k1) * d3 + s * d2;
        const cplx* arow = a + k1 * d2;
        for (std::size_t k2 = 0; k2 < d2; ++k2) acc += trow[k2] * arow[k2];
      }
      q[r * dS + s] = acc;
    }
  }
}

void trace_over_output(const cplx* t, cplx* out, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
#pragma omp parallel for collapse(2) schedule(static) if (d2 * d2 * dS >= kGrain)
  for (std::size_t k1 = 0; k1 < d2; ++k1) {
    for (std::size_t k2 = 0; k2 < d2; ++k2) {
      cplx acc(0.0, 0.0);
      for (std::size_t r = 0; r < dS; ++r) acc += t[(r * d2 + k1) * d3 + (r * d2 + k2)];
      out[k1 * d2 + k2] = acc;
    }
  }
}

void trace_over_initial(const cplx* t, cplx* out, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
#pragma omp parallel for collapse(2) schedule(static) if (d2 * d2 * dS >= kGrain)
  for (std::size_t k1 = 0; k1 < d2; ++k1) {
    for (std::size_t k2 = 0; k2 < d2; ++k2) {
      cplx acc(0.0, 0.0);
      for (std::size_t x = 0; x < dS; ++x) acc += t[(k1 * dS + x) * d3 + (k2 * dS + x)];
      out[k1 * d2 + k2] = acc;
    }
  }
}

void accumulate_response(cplx* t, const cplx* q, const cplx* d, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
#pragma omp parallel for collapse(2) schedule(static) if (d3 * d3 >= kGrain)
  for (std::size_t r = 0; r < dS; ++r) {
    for (std::size_t k1 = 0; k1 < d2; ++k1) {
      cplx* trow = t + (r * d2 + k1) * d3;
      for (std::size_t s = 0; s < dS; ++s) {
        const cplx qv = q[r * dS + s];
        const cplx* drow = d + k1 * d2;
        for (std::size_t k2 = 0; k2 < d2; ++k2)
          trow[s * d2 + k2] += qv * std::conj(drow[k2]);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Serial reference implementations. Written independently with flat loops;
// the unit tests hold the parallel kernels to these.
// ---------------------------------------------------------------------------

namespace serial {

void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t n, std::size_t k,
            std::size_t m) {
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      cplx acc(0.0, 0.0);
      for (std::size_t i = 0; i < k; ++i) acc += a[r * k + i] * b[i * m + c];
      out[r * m + c] = acc;
    }
  }
}

void kron(const cplx* a, std::size_t ra, std::size_t ca, const cplx* b, std::size_t rb,
          std::size_t cb, cplx* out) {
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ca; ++j)
      for (std::size_t k2 = 0; k2 < rb; ++k2)
        for (std::size_t l = 0; l < cb; ++l)
          out[(i * rb + k2) * (ca * cb) + (j * cb + l)] = a[i * ca + j] * b[k2 * cb + l];
}

void partial_trace_first(const cplx* m, std::size_t dA, std::size_t dB, cplx* out) {
  for (std::size_t r = 0; r < dA; ++r)
    for (std::size_t s = 0; s < dA; ++s) {
      cplx acc(0.0, 0.0);
      for (std::size_t b = 0; b < dB; ++b)
        acc += m[(r * dB + b) * (dA * dB) + (s * dB + b)];
      out[r * dA + s] = acc;
    }
}

void partial_trace_second(const cplx* m, std::size_t dA, std::size_t dB, cplx* out) {
  for (std::size_t a = 0; a < dB; ++a)
    for (std::size_t b = 0; b < dB; ++b) {
      cplx acc(0.0, 0.0);
      for (std::size_t r = 0; r < dA; ++r)
        acc += m[(r * dB + a) * (dA * dB) + (r * dB + b)];
      out[a * dB + b] = acc;
    }
}

void build_mmap(const cplx* u, const cplx* rho, std::size_t dS, std::size_t dE, cplx* out) {
  const std::size_t d3 = dS * dS * dS;
  const std::size_t dj = dS * dE;
  for (std::size_t r = 0; r < dS; ++r)
    for (std::size_t rp = 0; rp < dS; ++rp)
      for (std::size_t rpp = 0; rpp < dS; ++rpp)
        for (std::size_t s = 0; s < dS; ++s)
          for (std::size_t sp = 0; sp < dS; ++sp)
            for (std::size_t spp = 0; spp < dS; ++spp) {
              cplx acc(0.0, 0.0);
              for (std::size_t e = 0; e < dE; ++e)
                for (std::size_t a = 0; a < dE; ++a)
                  for (std::size_t b = 0; b < dE; ++b)
                    acc += u[(r * dE + e) * dj + (rp * dE + a)] *
                           rho[(rpp * dE + a) * dj + (spp * dE + b)] *
                           std::conj(u[(s * dE + e) * dj + (sp * dE + b)]);
              out[((r * dS + rp) * dS + rpp) * d3 + ((s * dS + sp) * dS + spp)] = acc;
            }
}

void contract_super(const cplx* t, const cplx* a, cplx* q, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
  for (std::size_t r = 0; r < dS; ++r)
    for (std::size_t s = 0; s < dS; ++s) {
      cplx acc(0.0, 0.0);
      for (std::size_t k1 = 0; k1 < d2; ++k1)
        for (std::size_t k2 = 0; k2 < d2; ++k2)
          acc += t[(r * d2 + k1) * d3 + (s * d2 + k2)] * a[k1 * d2 + k2];
      q[r * dS + s] = acc;
    }
}

void trace_over_output(const cplx* t, cplx* out, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
  for (std::size_t k1 = 0; k1 < d2; ++k1)
    for (std::size_t k2 = 0; k2 < d2; ++k2) {
      cplx acc(0.0, 0.0);
      for (std::size_t r = 0; r < dS; ++r) acc += t[(r * d2 + k1) * d3 + (r * d2 + k2)];
      out[k1 * d2 + k2] = acc;
    }
}

void trace_over_initial(const cplx* t, cplx* out, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
  for (std::size_t k1 = 0; k1 < d2; ++k1)
    for (std::size_t k2 = 0; k2 < d2; ++k2) {
      cplx acc(0.0, 0.0);
      for (std::size_t x = 0; x < dS; ++x) acc += t[(k1 * dS + x) * d3 + (k2 * dS + x)];
      out[k1 * d2 + k2] = acc;
    }
}

void accumulate_response(cplx* t, const cplx* q, const cplx* d, std::size_t dS) {
  const std::size_t d2 = dS * dS;
  const std::size_t d3 = d2 * dS;
  for (std::size_t r = 0; r < dS; ++r)
    for (std::size_t k1 = 0; k1 < d2; ++k1)
      for (std::size_t s = 0; s < dS; ++s)
        for (std::size_t k2 = 0; k2 < d2; ++k2)
          t[(r * d2 + k1) * d3 + (s * d2 + k2)] += q[r * dS + s] * std::conj(d[k1 * d2 + k2]);
}

}  // namespace serial

}  // namespace mqpt::kernels
