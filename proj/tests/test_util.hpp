#ifndef LFIQA_TEST_UTIL_HPP
#define LFIQA_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lfiqa/image.hpp"

namespace testutil {

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng{std::random_device{}()};
        for (int i = 0; i < 64; ++i) {
            auto candidate = base / ("lfiqa_test_" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

namespace detail {
inline void put_u16(std::vector<uint8_t>& b, uint16_t v) {
    b.push_back(v & 0xff);
    b.push_back(v >> 8);
}
inline void put_u32(std::vector<uint8_t>& b, uint32_t v) {
    for (int i = 0; i < 4; ++i)
        b.push_back((v >> (8 * i)) & 0xff);
}
} // namespace detail

// rgb(x, y) -> {r, g, b}
inline std::vector<uint8_t> bmp24_bytes(int w, int h,
                                        const std::function<std::array<uint8_t, 3>(int, int)>& rgb) {
    using namespace detail;
    const int row_bytes = (3 * w + 3) & ~3;
    std::vector<uint8_t> b;
    b.push_back('B');
    b.push_back('M');
    put_u32(b, 54 + row_bytes * h);
    put_u32(b, 0);
    put_u32(b, 54);
    put_u32(b, 40);
    put_u32(b, uint32_t(w));
    put_u32(b, uint32_t(h)); // bottom-up
    put_u16(b, 1);
    put_u16(b, 24);
    put_u32(b, 0);
    put_u32(b, uint32_t(row_bytes * h));
    put_u32(b, 2835);
    put_u32(b, 2835);
    put_u32(b, 0);
    put_u32(b, 0);
    for (int y = h - 1; y >= 0; --y) {
        size_t row_start = b.size();
        for (int x = 0; x < w; ++x) {
            auto [r, g, bl] = rgb(x, y);
            b.push_back(bl);
            b.push_back(g);
            b.push_back(r);
        }
        while (b.size() - row_start < size_t(row_bytes))
            b.push_back(0);
    }
    return b;
}

inline std::vector<uint8_t> bmp8_gray_bytes(int w, int h,
                                            const std::function<uint8_t(int, int)>& gray) {
    using namespace detail;
    const int row_bytes = (w + 3) & ~3;
    std::vector<uint8_t> b;
    b.push_back('B');
    b.push_back('M');
    put_u32(b, 54 + 1024 + row_bytes * h);
    put_u32(b, 0);
    put_u32(b, 54 + 1024);
    put_u32(b, 40);
    put_u32(b, uint32_t(w));
    put_u32(b, uint32_t(h));
    put_u16(b, 1);
    put_u16(b, 8);
    put_u32(b, 0);
    put_u32(b, uint32_t(row_bytes * h));
    put_u32(b, 2835);
    put_u32(b, 2835);
    put_u32(b, 256);
    put_u32(b, 0);
    for (int i = 0; i < 256; ++i) { // gray palette, BGRA
        b.push_back(uint8_t(i));
        b.push_back(uint8_t(i));
        b.push_back(uint8_t(i));
        b.push_back(0);
    }
    for (int y = h - 1; y >= 0; --y) {
        size_t row_start = b.size();
        for (int x = 0; x < w; ++x)
            b.push_back(gray(x, y));
        while (b.size() - row_start < size_t(row_bytes))
            b.push_back(0);
    }
    return b;
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

inline lfiqa::LumaImage random_image(int w, int h, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 255.0);
    std::vector<double> samples(size_t(w) * h);
    for (double& s : samples)
        s = dist(rng);
    return lfiqa::make_luma_image(w, h, std::move(samples));
}

// Deterministic smooth test pattern with texture across scales.
inline lfiqa::LumaImage smooth_image(int w, int h) {
    std::vector<double> samples(size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 96.0 + 64.0 * std::sin(2 * M_PI * x / 97.0) * std::cos(2 * M_PI * y / 71.0) +
                       48.0 * std::sin(2 * M_PI * (x + y) / 211.0) + 0.05 * x;
            samples[size_t(y) * w + x] = std::clamp(v, 0.0, 255.0);
        }
    return lfiqa::LumaImage{w, h, std::move(samples)};
}

inline lfiqa::LumaImage add_gaussian_noise(const lfiqa::LumaImage& img, double sigma,
                                           uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    lfiqa::LumaImage out = img;
    for (double& s : out.data)
        s = std::clamp(s + noise(rng), 0.0, 255.0);
    return out;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

#ifdef LFIQA_CLI_PATH
// Runs the CLI binary with stdout/stderr captured to files in a temp dir.
inline CliResult run_cli(const std::string& args) {
    TempDir dir;
    auto out_path = dir.file("out.txt");
    auto err_path = dir.file("err.txt");
    std::string cmd = std::string(LFIQA_CLI_PATH) + " " + args + " >" + out_path.string() +
                      " 2>" + err_path.string();
    int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = (status == -1) ? -1 : WEXITSTATUS(status);
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}
#endif

} // namespace testutil

#endif
