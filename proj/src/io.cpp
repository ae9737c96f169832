#include "mqpt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mqpt/constants.hpp"

namespace mqpt::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

void expect_tag(std::istream& is, const std::string& tag, const std::string& what) {
  std::string t;
  if (!(is >> t) || t != tag)
    throw std::runtime_error(what + ": expected '" + tag + "' header, got '" + t + "'");
}

double read_double(std::istream& is, const std::string& what) {
  double v;
  if (!(is >> v)) throw std::runtime_error(what + ": malformed number");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag());
    }
    os << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& is) {
  std::size_t rows, cols;
  if (!(is >> rows >> cols)) throw std::runtime_error("read_matrix: malformed size header");
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double re = read_double(is, "read_matrix");
      const double im = read_double(is, "read_matrix");
      m(r, c) = cplx(re, im);
    }
  return m;
}

void save_state(const std::string& path, const BipartiteState& state) {
  auto os = open_out(path);
  os << state.system_dim() << ' ' << state.env_dim() << '\n';
  write_matrix(os, state.joint());
}

BipartiteState load_state(const std::string& path) {
  auto is = open_in(path);
  std::size_t dS, dE;
  if (!(is >> dS >> dE)) throw std::runtime_error("load_state: malformed dimension header");
  return BipartiteState(dS, dE, read_matrix(is));
}

void save_unitary(const std::string& path, const UnitaryMatrix& u, std::size_t dS,
                  std::size_t dE) {
  if (u.dim() != dS * dE)
    throw std::invalid_argument("save_unitary: header dims disagree with matrix");
  auto os = open_out(path);
  os << dS << ' ' << dE << '\n';
  write_matrix(os, u.mat());
}

LoadedUnitary load_unitary(const std::string& path) {
  auto is = open_in(path);
  std::size_t dS, dE;
  if (!(is >> dS >> dE)) throw std::runtime_error("load_unitary: malformed dimension header");
  UnitaryMatrix u(read_matrix(is));
  if (u.dim() != dS * dE)
    throw std::runtime_error("load_unitary: matrix size disagrees with header dims");
  return LoadedUnitary{std::move(u), dS, dE};
}

void save_mmap(const std::string& path, const MMap& m) {
  auto os = open_out(path);
  os << "MMAP " << m.dim << '\n';
  write_matrix(os, m.tensor);
}

MMap load_mmap(const std::string& path) {
  auto is = open_in(path);
  expect_tag(is, "MMAP", "load_mmap");
  MMap m;
  if (!(is >> m.dim)) throw std::runtime_error("load_mmap: malformed dimension");
  m.tensor = read_matrix(is);
  if (m.tensor.rows() != m.dim * m.dim * m.dim || !m.tensor.square())
    throw std::runtime_error("load_mmap: tensor size disagrees with header");
  return m;
}

void save_memory(const std::string& path, const MemoryMatrix& k) {
  auto os = open_out(path);
  os << "KMAT " << k.dim << '\n';
  write_matrix(os, k.tensor);
}

MemoryMatrix load_memory(const std::string& path) {
  auto is = open_in(path);
  expect_tag(is, "KMAT", "load_memory");
  MemoryMatrix k;
  if (!(is >> k.dim)) throw std::runtime_error("load_memory: malformed dimension");
  k.tensor = read_matrix(is);
  if (k.tensor.rows() != k.dim * k.dim * k.dim || !k.tensor.square())
    throw std::runtime_error("load_memory: tensor size disagrees with header");
  return k;
}

void save_dynamical(const std::string& path, const DynamicalMap& b) {
  auto os = open_out(path);
  os << "BMAP " << b.dim << '\n';
  write_matrix(os, b.linear);
  write_matrix(os, b.affine);
}

DynamicalMap load_dynamical(const std::string& path) {
  auto is = open_in(path);
  expect_tag(is, "BMAP", "load_dynamical");
  DynamicalMap b;
  if (!(is >> b.dim)) throw std::runtime_error("load_dynamical: malformed dimension");
  b.linear = read_matrix(is);
  b.affine = read_matrix(is);
  if (b.linear.rows() != b.dim * b.dim || b.affine.rows() != b.dim)
    throw std::runtime_error("load_dynamical: block sizes disagree with header");
  return b;
}

void save_record(const std::string& path, const TomographyRecord& record) {
  auto os = open_out(path);
  os << "TOMOREC " << record.dim << ' ' << record.env_dim << ' ' << record.seed << ' '
     << format_double(record.noise_sigma) << '\n';
  for (const auto& e : record.entries) {
    os << "ENTRY " << e.m << ' ' << e.n << ' ' << format_double(e.p) << ' '
       << (e.degenerate ? 1 : 0) << '\n';
    write_matrix(os, e.q.mat());
    write_matrix(os, e.unnormalized);
  }
}

TomographyRecord load_record(const std::string& path) {
  auto is = open_in(path);
  expect_tag(is, "TOMOREC", "load_record");
  TomographyRecord record;
  if (!(is >> record.dim >> record.env_dim >> record.seed))
    throw std::runtime_error("load_record: malformed header");
  record.noise_sigma = read_double(is, "load_record");

  const std::size_t grid = record.dim * record.dim * record.dim * record.dim;
  record.entries.reserve(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    expect_tag(is, "ENTRY", "load_record");
    std::size_t m, n;
    int degenerate;
    if (!(is >> m >> n)) throw std::runtime_error("load_record: malformed entry indices");
    const double p = read_double(is, "load_record");
    if (!(is >> degenerate)) throw std::runtime_error("load_record: malformed entry flag");
    ComplexMatrix q = read_matrix(is);
    ComplexMatrix unnorm = read_matrix(is);
    // stored q came from a valid entry; re-admit it with a floor matching
    // the recorded noise level
    const double floor = tol::kEigClamp + 8.0 * record.noise_sigma *
                                              static_cast<double>(record.dim) /
                                              std::max(p, tol::kProbabilityFloor);
    record.entries.push_back(TomographyEntry{m, n, p, DensityMatrix(std::move(q), floor),
                                             std::move(unnorm), degenerate != 0});
  }
  return record;
}

}  // namespace mqpt::io
