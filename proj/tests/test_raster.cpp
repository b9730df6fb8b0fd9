#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ersr/io.hpp"
#include "ersr/raster.hpp"
#include "oracles.hpp"

using namespace ersr;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    const auto dir = fs::temp_directory_path() / "ersr_raster_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("zero-sum kernel on constant input gives zero") {
    FloatGrid g(7, 9, 0.5);
    for (const auto& k : {sobel_horizontal(), sobel_vertical(), laplacian4()}) {
        const FloatGrid out = convolve3x3(g, k);
        for (double v : out.data) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("1x1 grid collapses to center value times kernel sum") {
    FloatGrid g(1, 1);
    g.at(0, 0) = 0.37;
    Kernel3x3 k{{1, -2, 3, 0.5, 4, -1, 2, 0, 1}};
    double ksum = 0;
    for (double w : k.w) ksum += w;
    const FloatGrid out = convolve3x3(g, k);
    CHECK(out.at(0, 0) == doctest::Approx(0.37 * ksum));
}

TEST_CASE("vertical step against the direct correlation oracle") {
    FloatGrid g(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g.at(r, c) = c >= 2 ? 1.0 : 0.0;
    const FloatGrid fast = convolve3x3(g, sobel_horizontal());
    const FloatGrid ref = oracle::correlate3x3(g, sobel_horizontal());
    for (std::size_t i = 0; i < fast.data.size(); ++i)
        CHECK(fast.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));
}

TEST_CASE("convolution is linear") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const FloatGrid g1 = oracle::random_grid(rng, 12, 9);
        const FloatGrid g2 = oracle::random_grid(rng, 12, 9);
        const double a = 1.7, b = -0.4;
        FloatGrid mix(12, 9);
        for (std::size_t i = 0; i < mix.data.size(); ++i)
            mix.data[i] = a * g1.data[i] + b * g2.data[i];
        const Kernel3x3 k = laplacian4();
        const FloatGrid lhs = convolve3x3(mix, k);
        const FloatGrid r1 = convolve3x3(g1, k);
        const FloatGrid r2 = convolve3x3(g2, k);
        for (std::size_t i = 0; i < lhs.data.size(); ++i)
            CHECK(std::abs(lhs.data[i] - (a * r1.data[i] + b * r2.data[i])) < 1e-6);
    }
}

TEST_CASE("replicate padding is translation-equivariant in the interior") {
    std::mt19937 rng(12);
    const FloatGrid g = oracle::random_grid(rng, 10, 10);
    FloatGrid shifted(10, 10);
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) shifted.at(r + 1, c + 1) = g.at(r, c);
    const FloatGrid a = convolve3x3(g, sobel_vertical());
    const FloatGrid b = convolve3x3(shifted, sobel_vertical());
    // compare pixels >= 1 away from borders in both frames
    for (int r = 1; r < 8; ++r)
        for (int c = 1; c < 8; ++c)
            CHECK(b.at(r + 1, c + 1) == doctest::Approx(a.at(r, c)).epsilon(1e-12));
}

TEST_CASE("binarize is strict") {
    FloatGrid g(1, 3);
    g.at(0, 0) = 0.2;
    g.at(0, 1) = 0.5;
    g.at(0, 2) = 0.8;
    const BinaryMask m = binarize(g, 0.5);
    CHECK(m.at(0, 0) == 0);
    CHECK(m.at(0, 1) == 0); // 0.5 > 0.5 is false
    CHECK(m.at(0, 2) == 1);

    const BinaryMask all_half = binarize(FloatGrid(4, 4, 0.5), 0.5);
    CHECK(all_half.foreground_count() == 0);
}

TEST_CASE("ersrf32 round trip is bit-identical") {
    std::mt19937 rng(13);
    FloatGrid g = oracle::random_grid(rng, 17, 5, -3.0, 3.0);
    // quantize to f32 so the in-memory grid is exactly representable
    for (auto& v : g.data) v = static_cast<float>(v);
    const auto p1 = temp_file("rt1.ersrf32");
    const auto p2 = temp_file("rt2.ersrf32");
    write_ersrf32(g, p1);
    const FloatGrid back = read_ersrf32(p1);
    CHECK(back.height == g.height);
    CHECK(back.width == g.width);
    for (std::size_t i = 0; i < g.data.size(); ++i) CHECK(back.data[i] == g.data[i]);
    write_ersrf32(back, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("ersrf32 rejects malformed input") {
    const auto p = temp_file("bad.ersrf32");
    {
        std::ofstream out(p, std::ios::binary);
        out << "NOPE";
    }
    CHECK_THROWS_AS(read_ersrf32(p), IoError);
    {
        std::ofstream out(p, std::ios::binary);
        out << "ERSR"; // header truncated
    }
    CHECK_THROWS_AS(read_ersrf32(p), IoError);
    CHECK_THROWS_AS(read_ersrf32(temp_file("missing.ersrf32")), IoError);
}

TEST_CASE("png gray quantization rules") {
    FloatGrid g(1, 3);
    g.at(0, 0) = 0.0;
    g.at(0, 1) = 128.0 / 255.0;
    g.at(0, 2) = 1.0;
    const auto p = temp_file("gray.png");
    write_png_gray(g, p);
    const FloatGrid back = read_png_gray(p);
    CHECK(back.at(0, 0) == doctest::Approx(0.0));
    CHECK(back.at(0, 1) == doctest::Approx(128.0 / 255.0)); // ~0.50196
    CHECK(back.at(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("mask png round trip") {
    BinaryMask m(5, 4);
    m.at(0, 0) = 1;
    m.at(4, 3) = 1;
    m.at(2, 2) = 1;
    const auto p = temp_file("mask.png");
    write_mask_png(m, p);
    const BinaryMask back = read_mask_png(p);
    CHECK(back.data == m.data);
}

TEST_CASE("read_image dispatches by extension") {
    CHECK_THROWS_AS(read_image("whatever.tiff"), IoError);
    FloatGrid g(2, 2, 0.25);
    const auto p = temp_file("disp.ersrf32");
    write_image(g, p);
    CHECK(read_image(p).at(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("grid constructors enforce dimensions") {
    CHECK_THROWS_AS(FloatGrid(0, 5), Error);
    CHECK_THROWS_AS(BinaryMask(3, 0), Error);
}
