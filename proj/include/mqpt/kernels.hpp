#ifndef MQPT_KERNELS_HPP
#define MQPT_KERNELS_HPP

#include <complex>
#include <cstddef>

// Hot tensor-contraction loops. Each kernel exists twice: the default entry
// points carry OpenMP pragmas on their outer (independent-output) loops, and
// mqpt::kernels::serial holds plain reference loops. Parallel kernels only
// distribute output entries across threads -- every entry keeps its serial
// summation order -- so both variants produce identical results and the
// library stays deterministic under any thread count.
//
// Index conventions (the single source of truth, used verbatim everywhere):
//   joint bipartite index      (r, a) -> r*dE + a          (system factor first)
//   preparation/map grouping   k(r', r'') -> r'*dS + r''
//   super-super grouping       iota(r, r', r'') -> r*dS^2 + r'*dS + r''
// Rows and columns of every tensor use the same grouping.

namespace mqpt::kernels {

using cplx = std::complex<double>;

// out[n x m] = a[n x k] * b[k x m]
void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t n, std::size_t k,
            std::size_t m);

// out[(ra*rb) x (ca*cb)], out(i*rb+k, j*cb+l) = a(i,j) * b(k,l)
void kron(const cplx* a, std::size_t ra, std::size_t ca, const cplx* b, std::size_t rb,
          std::size_t cb, cplx* out);

// m is (dA*dB)-square over the joint index; out is dA-square (sum over the
// second factor) or dB-square (sum over the first factor)
void partial_trace_first(const cplx* m, std::size_t dA, std::size_t dB, cplx* out);
void partial_trace_second(const cplx* m, std::size_t dA, std::size_t dB, cplx* out);

// The d^3 x d^3 super-superoperator built from u ((dS*dE)-square) and the
// joint state rho:
//   out[iota(r,r',r''), iota(s,s',s'')] =
//       sum_{a,b,e} u[(r e),(r' a)] * rho[(r'' a),(s'' b)] * conj(u[(s e),(s' b)])
void build_mmap(const cplx* u, const cplx* rho, std::size_t dS, std::size_t dE, cplx* out);

// q[r,s] = sum_{r',r'',s',s''} t[iota(r,r',r''), iota(s,s',s'')] * a[k(r',r''), k(s',s'')]
// t is d^3-square, a is d^2-square, q is d-square.
void contract_super(const cplx* t, const cplx* a, cplx* q, std::size_t dS);

// delta_{r s} contraction: out[k(r',r''), k(s',s'')] = sum_r t[iota(r,..), iota(r,..)]
void trace_over_output(const cplx* t, cplx* out, std::size_t dS);

// delta_{r'' s''} contraction: out[(r dS + r'), (s dS + s')] = sum_x t[iota(r,r',x), iota(s,s',x)]
void trace_over_initial(const cplx* t, cplx* out, std::size_t dS);

// t += q (x) conj(d): t[iota(r,r',r''), iota(s,s',s'')] += q[r,s] * conj(d[k(r',r''), k(s',s'')])
void accumulate_response(cplx* t, const cplx* q, const cplx* d, std::size_t dS);

namespace serial {
void matmul(const cplx* a, const cplx* b, cplx* out, std::size_t n, std::size_t k,
            std::size_t m);
void kron(const cplx* a, std::size_t ra, std::size_t ca, const cplx* b, std::size_t rb,
          std::size_t cb, cplx* out);
void partial_trace_first(const cplx* m, std::size_t dA, std::size_t dB, cplx* out);
void partial_trace_second(const cplx* m, std::size_t dA, std::size_t dB, cplx* out);
void build_mmap(const cplx* u, const cplx* rho, std::size_t dS, std::size_t dE, cplx* out);
void contract_super(const cplx* t, const cplx* a, cplx* q, std::size_t dS);
void trace_over_output(const cplx* t, cplx* out, std::size_t dS);
void trace_over_initial(const cplx* t, cplx* out, std::size_t dS);
void accumulate_response(cplx* t, const cplx* q, const cplx* d, std::size_t dS);
}  // namespace serial

}  // namespace mqpt::kernels

#endif
