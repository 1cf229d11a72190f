#pragma once

// Bitmaps of the planar set obtained by interleaving a binary sequence of X_Omega into
// the binary digits of two coordinates.

#include <cstdint>
#include <ostream>
#include <vector>

#include "mshift/omega.hpp"

namespace mshift {

/// 2^N x 2^N bitmap. Pixel (x, y) holds the length-2N word whose odd positions spell x and
/// whose even positions spell y in binary, most significant digit first.
struct RenderGrid {
    int resolution = 0;
    /// Row-major, row 0 at the top, so that y grows upwards.
    std::vector<std::uint8_t> bits;

    long side() const { return 1L << resolution; }
    bool at(long x, long y) const { return bits[static_cast<std::size_t>((side() - 1 - y) * side() + x)] != 0; }
    long count_set() const;
};

inline constexpr int kMaxRenderResolution = 12;
inline constexpr int kPresetRenderResolution = 9;

/// Marks every pixel whose word lies in Pref_{2N}(X_Omega). Only m = 2, q = 2 is supported;
/// other alphabets or bases throw std::invalid_argument, as does N outside 1..12.
RenderGrid render_interleaved(const PrefixAutomaton& aut, int q, int resolution);

/// Binary PGM (P5): set pixels black, others white.
void write_pgm(const RenderGrid& grid, std::ostream& out);

/// "x,y" per set pixel, scanned in row order from the top.
void write_csv(const RenderGrid& grid, std::ostream& out);

}  // namespace mshift
