#include "lfiqa/image_io.hpp"

#include <png.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace lfiqa {

namespace {

uint16_t read_u16(const unsigned char* p) { return uint16_t(p[0] | (p[1] << 8)); }
uint32_t read_u32(const unsigned char* p) {
    return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) | (uint32_t(p[3]) << 24);
}
int32_t read_s32(const unsigned char* p) { return static_cast<int32_t>(read_u32(p)); }

// Uncompressed BMP: 24-bit BGR and 8-bit palette (grayscale or otherwise).
LumaImage decode_bmp(const unsigned char* bytes, size_t size, const std::string& origin) {
    if (size < 54)
        throw Error(origin + ": truncated BMP header");
    uint32_t pixel_offset = read_u32(bytes + 10);
    uint32_t dib_size = read_u32(bytes + 14);
    if (dib_size < 40)
        throw Error(origin + ": unsupported BMP header");
    int32_t width = read_s32(bytes + 18);
    int32_t height_raw = read_s32(bytes + 22);
    uint16_t planes = read_u16(bytes + 26);
    uint16_t bpp = read_u16(bytes + 28);
    uint32_t compression = read_u32(bytes + 30);

    bool top_down = height_raw < 0;
    int32_t height = top_down ? -height_raw : height_raw;
    if (width < 1 || height < 1)
        throw Error(origin + ": zero-dimension image");
    if (planes != 1 || compression != 0 || (bpp != 24 && bpp != 8))
        throw Error(origin + ": unsupported BMP format (need uncompressed 24-bit or 8-bit)");

    // 8-bit files carry a BGRA palette right after the DIB header.
    uint32_t palette_count = 0;
    const unsigned char* palette = nullptr;
    if (bpp == 8) {
        palette_count = read_u32(bytes + 46);
        if (palette_count == 0)
            palette_count = 256;
        palette = bytes + 14 + dib_size;
        if (14 + dib_size + palette_count * 4ull > size)
            throw Error(origin + ": truncated BMP palette");
    }

    size_t row_bytes = (static_cast<size_t>(width) * bpp / 8 + 3) & ~size_t(3);
    if (pixel_offset + row_bytes * height > size)
        throw Error(origin + ": truncated BMP pixel data");

    std::vector<double> samples(static_cast<size_t>(width) * height);
    for (int32_t y = 0; y < height; ++y) {
        int32_t src_y = top_down ? y : height - 1 - y;
        const unsigned char* row = bytes + pixel_offset + row_bytes * src_y;
        for (int32_t x = 0; x < width; ++x) {
            double v;
            if (bpp == 24) {
                const unsigned char* px = row + 3 * x;
                v = luma_from_rgb(px[2], px[1], px[0]);
            } else {
                unsigned idx = row[x];
                if (idx >= palette_count)
                    throw Error(origin + ": palette index out of range");
                const unsigned char* pe = palette + 4 * idx;
                v = luma_from_rgb(pe[2], pe[1], pe[0]);
            }
            samples[static_cast<size_t>(y) * width + x] = v;
        }
    }
    return make_luma_image(width, height, std::move(samples));
}

struct PngSource {
    const unsigned char* bytes;
    size_t size;
    size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
    if (src->pos + count > src->size)
        png_error(png, "read past end of buffer");
    std::memcpy(out, src->bytes + src->pos, count);
    src->pos += count;
}

LumaImage decode_png(const unsigned char* bytes, size_t size, const std::string& origin) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw Error(origin + ": libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(origin + ": libpng init failed");
    }

    std::vector<unsigned char> pixels;
    std::vector<png_bytep> row_ptrs;
    png_uint_32 width = 0, height = 0;
    int channels = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(origin + ": corrupt or unreadable PNG");
    }

    PngSource src{bytes, size, 0};
    png_set_read_fn(png, &src, png_read_from_memory);
    png_read_info(png, info);

    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);
    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(origin + ": 16-bit PNG not supported");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    width = png_get_image_width(png, info);
    height = png_get_image_height(png, info);
    channels = png_get_channels(png, info);
    if (width < 1 || height < 1) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(origin + ": zero-dimension image");
    }
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(origin + ": unsupported PNG channel layout");
    }

    size_t row_bytes = png_get_rowbytes(png, info);
    pixels.resize(row_bytes * height);
    row_ptrs.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        row_ptrs[y] = pixels.data() + row_bytes * y;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<double> samples(static_cast<size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
        const unsigned char* row = pixels.data() + row_bytes * y;
        for (png_uint_32 x = 0; x < width; ++x) {
            double v = (channels == 1)
                           ? double(row[x])
                           : luma_from_rgb(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
            samples[static_cast<size_t>(y) * width + x] = v;
        }
    }
    return make_luma_image(static_cast<int>(width), static_cast<int>(height), std::move(samples));
}

} // namespace

LumaImage decode_image(const unsigned char* bytes, size_t size, const std::string& origin) {
    static const unsigned char png_magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (size >= 2 && bytes[0] == 'B' && bytes[1] == 'M')
        return decode_bmp(bytes, size, origin);
    if (size >= 8 && std::memcmp(bytes, png_magic, 8) == 0)
        return decode_png(bytes, size, origin);
    throw Error(origin + ": unsupported image format (need BMP or PNG)");
}

LumaImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open image file: " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error("cannot read image file: " + path.string());
    return decode_image(bytes.data(), bytes.size(), path.string());
}

} // namespace lfiqa
