#ifndef MQPT_IO_HPP
#define MQPT_IO_HPP

#include <iosfwd>
#include <string>

#include "mqpt/mmap.hpp"
#include "mqpt/states.hpp"
#include "mqpt/tomography.hpp"

namespace mqpt::io {

// Matrix text block: first line "rows cols", then row-major entries as
// "re im" pairs, one matrix row per line, 17 significant digits (doubles
// round-trip exactly).
void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);

// Bipartite states and joint-space unitaries carry a "dS dE" header line
// before the matrix block.
void save_state(const std::string& path, const BipartiteState& state);
BipartiteState load_state(const std::string& path);
void save_unitary(const std::string& path, const UnitaryMatrix& u, std::size_t dS,
                  std::size_t dE);
struct LoadedUnitary {
  UnitaryMatrix u;
  std::size_t dS, dE;
};
LoadedUnitary load_unitary(const std::string& path);

// Super-superoperator tensors: header "MMAP dS" / "KMAT dS"; dynamical maps:
// "BMAP dS" followed by the linear then the affine block.
void save_mmap(const std::string& path, const MMap& m);
MMap load_mmap(const std::string& path);
void save_memory(const std::string& path, const MemoryMatrix& k);
MemoryMatrix load_memory(const std::string& path);
void save_dynamical(const std::string& path, const DynamicalMap& b);
DynamicalMap load_dynamical(const std::string& path);

// Tomography records: header "TOMOREC dS dE seed noise_sigma", then one
// "ENTRY m n p degenerate" block per grid point with the normalized and
// unnormalized matrix payloads.
void save_record(const std::string& path, const TomographyRecord& record);
TomographyRecord load_record(const std::string& path);

// 17-significant-digit decimal used across all text formats.
std::string format_double(double v);

}  // namespace mqpt::io

#endif
