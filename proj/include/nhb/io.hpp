#pragma once

#include <iosfwd>

#include "nhb/models.hpp"

namespace nhb::io {

/// External-model exchange format, plain text:
///   NHGRID v1 N axis1 n1 min1 max1 axis2 n2 min2 max2
/// followed by whitespace-separated "re im" pairs, one N x N matrix per grid
/// point in row-major entry order, points in row-major (axis1-major) order.
struct GridAxisSpec {
  std::string name;
  int n = 0;
  double min = 0.0;
  double max = 0.0;
};

struct NhGridFile {
  int dim = 0;
  GridAxisSpec ax0, ax1;
  std::vector<cxmat> samples;  // index = i0 * ax1.n + i1
};

NhGridFile read_nhgrid(std::istream& in);
NhGridFile read_nhgrid_file(const std::string& path);
void write_nhgrid(std::ostream& out, const NhGridFile& grid);
void write_nhgrid_file(const std::string& path, const NhGridFile& grid);

/// Hamiltonian field over the file's two axes with bilinear interpolation
/// between samples; the preferred derivative step is half the cell size.
models::HamiltonianField external_model(const NhGridFile& grid);

/// Samples a 2-axis Hamiltonian family onto an exchange grid.
NhGridFile sample_model(const models::HamiltonianField& field,
                        const GridAxisSpec& ax0, const GridAxisSpec& ax1);

/// Flat result row: grid coordinates plus named quantities.
struct OutputRecord {
  Point p;
  std::vector<std::pair<std::string, cxmat>> matrices;
  std::vector<std::pair<std::string, cxd>> complexes;
  std::vector<std::pair<std::string, double>> reals;
  std::vector<std::pair<std::string, std::string>> texts;
};

/// JSON layout: {config_hash, version, generated_utc, records: [...]} with
/// complex numbers as [re, im] pairs and matrices as {shape, data}. The
/// timestamp is informational and excluded from the determinism contract.
void write_records_json(std::ostream& out, const std::string& config_hash,
                        const std::vector<std::string>& axis_names,
                        const std::vector<OutputRecord>& records,
                        bool with_timestamp = true);

/// CSV layout: one row per record; columns are the axis names followed by
/// quantity.component.row.col(.re|.im) per matrix entry.
void write_records_csv(std::ostream& out,
                       const std::vector<std::string>& axis_names,
                       const std::vector<OutputRecord>& records);

}  // namespace nhb::io
