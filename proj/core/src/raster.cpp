#include "mizo/raster.hpp"

#include <fstream>
#include <stdexcept>

namespace mizo {

void RasterView::validate() const {
    if (width == 0 || height == 0) throw std::invalid_argument("empty input");
    if (pixels.size() != 3 * pixel_count()) throw std::invalid_argument("pixel buffer size mismatch");
    std::vector<std::uint8_t> covered(pixel_count(), 0);
    for (const auto& m : masks) {
        if (m.size() != pixel_count()) throw std::invalid_argument("mask dimensions mismatch");
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i]) {
                if (covered[i]) throw std::invalid_argument("masks overlap");
                covered[i] = 1;
            }
        }
    }
}

namespace {

void skip_space_and_comments(std::istream& in) {
    int c = in.peek();
    while (c == '#' || std::isspace(c)) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            in.get();
        }
        c = in.peek();
    }
}

struct PnmHeader {
    std::size_t width = 0, height = 0, maxval = 0;
};

PnmHeader read_header(std::istream& in, const char* magic) {
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != magic[0] || m1 != magic[1]) throw std::runtime_error("unexpected pnm magic");
    PnmHeader h;
    skip_space_and_comments(in);
    in >> h.width;
    skip_space_and_comments(in);
    in >> h.height;
    skip_space_and_comments(in);
    in >> h.maxval;
    in.get();  // single whitespace before raster data
    if (!in || h.width == 0 || h.height == 0) throw std::runtime_error("bad pnm header");
    if (h.maxval != 255) throw std::runtime_error("only 8-bit pnm supported");
    return h;
}

}  // namespace

RasterView read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const PnmHeader h = read_header(in, "P6");
    RasterView v;
    v.width = h.width;
    v.height = h.height;
    v.pixels.resize(3 * v.pixel_count());
    in.read(reinterpret_cast<char*>(v.pixels.data()), static_cast<std::streamsize>(v.pixels.size()));
    if (!in) throw std::runtime_error("truncated ppm " + path);
    return v;
}

void write_ppm(const std::string& path, const RasterView& view) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P6\n" << view.width << " " << view.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(view.pixels.data()),
              static_cast<std::streamsize>(view.pixels.size()));
}

std::vector<std::uint8_t> read_pgm_mask(const std::string& path,
                                        std::size_t expect_w, std::size_t expect_h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const PnmHeader h = read_header(in, "P5");
    if (h.width != expect_w || h.height != expect_h)
        throw std::runtime_error("mask dimensions mismatch");
    std::vector<std::uint8_t> raw(h.width * h.height);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw std::runtime_error("truncated pgm " + path);
    for (auto& b : raw) b = b ? 1 : 0;
    return raw;
}

void write_pgm_mask(const std::string& path, const std::vector<std::uint8_t>& mask,
                    std::size_t w, std::size_t h) {
    if (mask.size() != w * h) throw std::invalid_argument("mask dimensions mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P5\n" << w << " " << h << "\n255\n";
    for (std::uint8_t b : mask) out.put(b ? char(255) : char(0));
}

}  // namespace mizo
