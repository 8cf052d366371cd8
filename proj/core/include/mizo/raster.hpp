#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mizo {

// 8-bit RGB raster plus per-object binary masks of identical dimensions.
// Masks are required to be pairwise disjoint.
struct RasterView {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;                 // row-major RGB triples
    std::vector<std::vector<std::uint8_t>> masks;     // 0/1 per pixel

    std::size_t pixel_count() const { return width * height; }

    const std::uint8_t* rgb(std::size_t x, std::size_t y) const {
        return pixels.data() + 3 * (y * width + x);
    }

    // Checks dimensions and mask disjointness; throws on violation.
    void validate() const;
};

// Binary PPM (P6) image I/O and binary PGM (P5) masks, nonzero = inside.
RasterView read_ppm(const std::string& path);
void write_ppm(const std::string& path, const RasterView& view);
std::vector<std::uint8_t> read_pgm_mask(const std::string& path,
                                        std::size_t expect_w, std::size_t expect_h);
void write_pgm_mask(const std::string& path, const std::vector<std::uint8_t>& mask,
                    std::size_t w, std::size_t h);

}  // namespace mizo
