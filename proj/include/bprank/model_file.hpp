#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bprank/core.hpp"

namespace bprank {

// Binary model layout (all integers and reals little-endian):
//   offset 0   8 bytes  magic "BPRMODEL"
//   offset 8   u32      format version (1)
//   offset 12  u64      dimension D
//   offset 20  f64      w_star
//   offset 28  D x f64  weights
struct ModelFile {
    static constexpr std::uint32_t kVersion = 1;

    double w_star = 1.0;
    RankerWeights weights;
};

void write_model(std::ostream& out, const ModelFile& model);
ModelFile read_model(std::istream& in);
void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

}  // namespace bprank
