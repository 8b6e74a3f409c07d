#pragma once

#include <filesystem>
#include <iosfwd>

#include "satact/network.hpp"

namespace satact {

// Binary network container. Every multi-byte field is little-endian,
// independent of host byte order:
//
//   bytes  field
//   8      magic "SATNET\0\1"
//   u32    L (number of affine layers)
//   u64    widths n_0..n_L            (L + 1 entries)
//   u32    activation name length, then that many ASCII bytes
//   f64    leak
//   u32    init scheme name length, then that many ASCII bytes
//   f64    init gain
//   u64    seed
//   then for l = 0..L-1:
//     f64  W^(l), row-major, n_{l+1} * n_l entries
//     f64  b^(l), n_{l+1} entries
void save_network(const Network& net, std::ostream& out);
void save_network(const Network& net, const std::filesystem::path& path);

// Throws BadMagicError, TruncatedFileError or FormatError on malformed input.
Network load_network(std::istream& in);
Network load_network(const std::filesystem::path& path);

}  // namespace satact
