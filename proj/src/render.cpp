#include "mshift/render.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mshift/oracle.hpp"

namespace mshift {

long RenderGrid::count_set() const {
    return static_cast<long>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

RenderGrid render_interleaved(const PrefixAutomaton& aut, int q, int resolution) {
    if (aut.alphabet_size() != 2 || q != 2) {
        throw std::invalid_argument("render supports m = 2 and q = 2 only (got m = " + std::to_string(aut.alphabet_size()) +
                                    ", q = " + std::to_string(q) + ")");
    }
    if (resolution < 1 || resolution > kMaxRenderResolution) {
        throw std::invalid_argument("render resolution must be in 1.." + std::to_string(kMaxRenderResolution));
    }
    RenderGrid grid;
    grid.resolution = resolution;
    const long side = grid.side();
    grid.bits.assign(static_cast<std::size_t>(side * side), 0);
    for_each_X_prefix(aut, q, 2L * resolution, [&](std::span<const int> w) {
        long x = 0;
        long y = 0;
        for (int k = 0; k < resolution; ++k) {
            x = 2 * x + w[static_cast<std::size_t>(2 * k)];
            y = 2 * y + w[static_cast<std::size_t>(2 * k + 1)];
        }
        grid.bits[static_cast<std::size_t>((side - 1 - y) * side + x)] = 1;
    });
    return grid;
}

void write_pgm(const RenderGrid& grid, std::ostream& out) {
    const long side = grid.side();
    out << "P5\n" << side << ' ' << side << "\n255\n";
    std::string row(static_cast<std::size_t>(side), '\0');
    for (long r = 0; r < side; ++r) {
        for (long c = 0; c < side; ++c) {
            row[static_cast<std::size_t>(c)] = grid.bits[static_cast<std::size_t>(r * side + c)] ? '\0' : '\xff';
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

void write_csv(const RenderGrid& grid, std::ostream& out) {
    const long side = grid.side();
    out << "x,y\n";
    for (long r = 0; r < side; ++r) {
        for (long c = 0; c < side; ++c) {
            if (grid.bits[static_cast<std::size_t>(r * side + c)]) out << c << ',' << side - 1 - r << '\n';
        }
    }
}

}  // namespace mshift
