#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "vispath/image.hpp"

using namespace vispath;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("vispath_test_" + name);
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("load_pnm maps P5 bytes directly") {
    auto p = temp_file("p5_direct.pgm");
    write_bytes(p, std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x80\x40", 4));
    auto img = std::get<GrayImage>(load_pnm(p));
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.data == std::vector<std::uint8_t>{0, 255, 128, 64});
}

TEST_CASE("load_pnm P6 single white pixel") {
    auto p = temp_file("p6_white.ppm");
    write_bytes(p, std::string("P6\n1 1\n255\n") + std::string("\xff\xff\xff", 3));
    auto img = std::get<RgbImage>(load_pnm(p));
    CHECK(img.width == 1);
    CHECK(img.data == std::vector<std::uint8_t>{255, 255, 255});
}

TEST_CASE("load_pnm error contracts") {
    auto big = temp_file("maxval.pgm");
    write_bytes(big, "P5\n2 2\n65535\n" + std::string(8, 'x'));
    CHECK_THROWS_WITH_AS(load_pnm(big), doctest::Contains("65535"), Error);
    try {
        load_pnm(big);
    } catch (const Error& e) {
        CHECK(e.code() == Err::UnsupportedMaxval);
    }

    auto trunc = temp_file("trunc.pgm");
    write_bytes(trunc, std::string("P5\n4 4\n255\n") + std::string(5, 'x'));
    try {
        load_pnm(trunc);
        FAIL("expected TruncatedData");
    } catch (const Error& e) {
        CHECK(e.code() == Err::TruncatedData);
    }

    auto badmagic = temp_file("magic.pgm");
    write_bytes(badmagic, "P2\n2 2\n255\n0 0 0 0\n");
    try {
        load_pnm(badmagic);
        FAIL("expected MalformedHeader");
    } catch (const Error& e) {
        CHECK(e.code() == Err::MalformedHeader);
    }
}

TEST_CASE("load_pnm accepts comment lines") {
    auto p = temp_file("comments.pgm");
    write_bytes(p, std::string("P5\n# a comment\n2 1\n# another\n255\n") + std::string("\x01\x02", 2));
    auto img = std::get<GrayImage>(load_pnm(p));
    CHECK(img.width == 2);
    CHECK(img.data == std::vector<std::uint8_t>{1, 2});
}

TEST_CASE("save_pnm writes magic and round-trips a gradient") {
    GrayImage img(3, 3);
    for (int i = 0; i < 9; ++i) img.data[i] = static_cast<std::uint8_t>(i * 20);
    auto p = temp_file("grad.pgm");
    save_pnm(img, p);
    std::ifstream in(p, std::ios::binary);
    char magic[3] = {};
    in.read(magic, 3);
    CHECK(magic[0] == 'P');
    CHECK(magic[1] == '5');
    CHECK(magic[2] == '\n');
    CHECK(std::get<GrayImage>(load_pnm(p)) == img);
}

TEST_CASE("save_pnm to unwritable path fails with IoFailure") {
    GrayImage img(2, 2);
    try {
        save_pnm(img, "/nonexistent-dir/zz/img.pgm");
        FAIL("expected IoFailure");
    } catch (const Error& e) {
        CHECK(e.code() == Err::IoFailure);
    }
}

TEST_CASE("pnm round trip is bit exact on random rasters") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 20; ++iter) {
        int w = 1 + static_cast<int>(rng() % 40);
        int h = 1 + static_cast<int>(rng() % 40);
        GrayImage g(w, h);
        for (auto& v : g.data) v = static_cast<std::uint8_t>(rng() & 0xff);
        auto pg = temp_file("rt.pgm");
        save_pnm(g, pg);
        CHECK(std::get<GrayImage>(load_pnm(pg)) == g);

        RgbImage c(w, h);
        for (auto& v : c.data) v = static_cast<std::uint8_t>(rng() & 0xff);
        auto pc = temp_file("rt.ppm");
        save_pnm(c, pc);
        CHECK(std::get<RgbImage>(load_pnm(pc)) == c);
    }
}

TEST_CASE("to_gray fixed points") {
    RgbImage img(3, 1);
    img.set(0, 0, 255, 255, 255);
    img.set(1, 0, 0, 0, 0);
    img.set(2, 0, 100, 100, 100);
    GrayImage g = to_gray(img);
    CHECK(g.at(0, 0) == 255);
    CHECK(g.at(1, 0) == 0);
    CHECK(g.at(2, 0) == 100);
}

TEST_CASE("convolve identity kernel is identity") {
    std::mt19937 rng(11);
    GrayImage img(9, 7);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() & 0xff);
    Kernel ident(3, {0, 0, 0, 0, 1, 0, 0, 0, 0});
    RealImage out = convolve(img, ident);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) CHECK(out.at(x, y) == doctest::Approx(img.at(x, y)));
}

TEST_CASE("convolve box kernel preserves constants") {
    GrayImage img(8, 8);
    std::fill(img.data.begin(), img.data.end(), std::uint8_t{77});
    Kernel box(3, std::vector<double>(9, 1.0 / 9.0));
    RealImage out = convolve(img, box);
    for (double v : out.data) CHECK(v == doctest::Approx(77.0).epsilon(1e-12));
}

TEST_CASE("convolve box on impulse gives a 3x3 plateau of ones") {
    // Hand-computed: impulse of 9 at the center of a 5x5 zero raster under a
    // 1/9 box kernel spreads to 9 * (1/9) = 1 over the 3x3 neighborhood.
    RealImage img(5, 5, 0.0);
    img.at(2, 2) = 9.0;
    Kernel box(3, std::vector<double>(9, 1.0 / 9.0));
    RealImage out = convolve(img, box);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            double expect = (std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1) ? 1.0 : 0.0;
            CHECK(out.at(x, y) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("convolve is linear") {
    std::mt19937 rng(13);
    RealImage i1(10, 6), i2(10, 6);
    for (auto& v : i1.data) v = static_cast<double>(rng() % 1000) / 10.0;
    for (auto& v : i2.data) v = static_cast<double>(rng() % 1000) / 10.0;
    std::vector<double> w(9);
    for (auto& v : w) v = (static_cast<double>(rng() % 200) - 100.0) / 50.0;
    Kernel k(3, w);
    const double a = 1.7, b = -0.6;
    RealImage mix(10, 6);
    for (size_t i = 0; i < mix.data.size(); ++i) mix.data[i] = a * i1.data[i] + b * i2.data[i];
    RealImage lhs = convolve(mix, k);
    RealImage r1 = convolve(i1, k), r2 = convolve(i2, k);
    for (size_t i = 0; i < lhs.data.size(); ++i)
        CHECK(lhs.data[i] == doctest::Approx(a * r1.data[i] + b * r2.data[i]).epsilon(1e-9));
}

TEST_CASE("replicate-border convolution of constants scales by kernel sum") {
    RealImage img(7, 7, 3.25);
    std::vector<double> w(25);
    double sum = 0.0;
    std::mt19937 rng(17);
    for (auto& v : w) {
        v = (static_cast<double>(rng() % 100) - 50.0) / 25.0;
        sum += v;
    }
    Kernel k(5, w);
    RealImage out = convolve(img, k);
    for (double v : out.data) CHECK(v == doctest::Approx(3.25 * sum).epsilon(1e-9));
}

TEST_CASE("convolve rejects oversized kernels") {
    RealImage img(3, 3, 1.0);
    Kernel k(5, std::vector<double>(25, 0.1));
    try {
        convolve(img, k);
        FAIL("expected KernelTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Err::KernelTooLarge);
    }
}
