#include "vispath/image.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vispath {

const char* err_name(Err e) {
    switch (e) {
        case Err::MalformedHeader: return "MalformedHeader";
        case Err::UnsupportedMaxval: return "UnsupportedMaxval";
        case Err::TruncatedData: return "TruncatedData";
        case Err::IoFailure: return "IoFailure";
        case Err::KernelTooLarge: return "KernelTooLarge";
        case Err::NonPositiveSigma: return "NonPositiveSigma";
        case Err::ImageTooSmall: return "ImageTooSmall";
        case Err::BadThresholds: return "BadThresholds";
        case Err::StartGoalDisparityMismatch: return "StartGoalDisparityMismatch";
        case Err::BadRadii: return "BadRadii";
        case Err::NotFound: return "NotFound";
        case Err::Ambiguous: return "Ambiguous";
        case Err::GoalNotFound: return "GoalNotFound";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::BadWindow: return "BadWindow";
        case Err::ZeroDisparity: return "ZeroDisparity";
        case Err::ParallelLines: return "ParallelLines";
        case Err::DegenerateSegment: return "DegenerateSegment";
        case Err::StereoFailure: return "StereoFailure";
        case Err::NoPath: return "NoPath";
        case Err::StartInObstacle: return "StartInObstacle";
        case Err::GoalInObstacle: return "GoalInObstacle";
        case Err::OverlapError: return "OverlapError";
        case Err::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
// The character terminating the token is pushed back so the single
// separator byte before the raster stays in the stream.
std::string next_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c != EOF) in.unget();
    return tok;
}

int parse_dim(const std::string& tok, const char* what) {
    if (tok.empty()) fail(Err::MalformedHeader, std::string("missing ") + what);
    for (char ch : tok)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            fail(Err::MalformedHeader, std::string("non-numeric ") + what + ": " + tok);
    long v = std::strtol(tok.c_str(), nullptr, 10);
    if (v < 1 || v > 1 << 20) fail(Err::MalformedHeader, std::string("bad ") + what + ": " + tok);
    return static_cast<int>(v);
}

}  // namespace

PnmImage load_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::IoFailure, "cannot open " + path.string());

    std::string magic = next_token(in);
    if (magic != "P5" && magic != "P6") fail(Err::MalformedHeader, "magic '" + magic + "' is not P5/P6");

    int w = parse_dim(next_token(in), "width");
    int h = parse_dim(next_token(in), "height");
    std::string maxval = next_token(in);
    if (maxval.empty()) fail(Err::MalformedHeader, "missing maxval");
    if (maxval != "255") fail(Err::UnsupportedMaxval, "maxval " + maxval + " (only 255 supported)");
    // Exactly one whitespace byte separates the header from the raster.
    int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) fail(Err::MalformedHeader, "missing separator after maxval");

    size_t channels = (magic == "P5") ? 1 : 3;
    size_t need = static_cast<size_t>(w) * h * channels;
    std::vector<std::uint8_t> bytes(need);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(need));
    if (static_cast<size_t>(in.gcount()) != need)
        fail(Err::TruncatedData, "expected " + std::to_string(need) + " raster bytes, got " +
                                     std::to_string(in.gcount()));

    if (magic == "P5") {
        GrayImage img(w, h);
        img.data = std::move(bytes);
        return img;
    }
    RgbImage img(w, h);
    img.data = std::move(bytes);
    return img;
}

namespace {

void write_pnm(const char* magic, int w, int h, const std::uint8_t* bytes, size_t n,
               const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot open " + path.string() + " for writing");
    out << magic << "\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes), static_cast<std::streamsize>(n));
    out.flush();
    if (!out) fail(Err::IoFailure, "write failed for " + path.string());
}

}  // namespace

void save_pnm(const GrayImage& image, const std::filesystem::path& path) {
    write_pnm("P5", image.width, image.height, image.data.data(), image.data.size(), path);
}

void save_pnm(const RgbImage& image, const std::filesystem::path& path) {
    write_pnm("P6", image.width, image.height, image.data.data(), image.data.size(), path);
}

GrayImage to_gray(const RgbImage& image) {
    GrayImage out(image.width, image.height);
    const std::uint8_t* p = image.data.data();
    for (size_t i = 0; i < out.data.size(); ++i, p += 3) {
        double v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
        long q = std::lround(v);
        out.data[i] = static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
    }
    return out;
}

RealImage to_real(const GrayImage& image) {
    RealImage out(image.width, image.height);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = static_cast<double>(image.data[i]);
    return out;
}

GrayImage to_gray8(const RealImage& image) {
    GrayImage out(image.width, image.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        long q = std::lround(image.data[i]);
        out.data[i] = static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
    }
    return out;
}

RealImage convolve(const RealImage& image, const Kernel& kernel) {
    if (kernel.size > image.width || kernel.size > image.height)
        fail(Err::KernelTooLarge, "kernel " + std::to_string(kernel.size) + " exceeds image dims");
    const int c = kernel.size / 2;
    RealImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < kernel.size; ++j)
                for (int i = 0; i < kernel.size; ++i)
                    acc += kernel.at(i, j) * image.at_clamped(x + i - c, y + j - c);
            out.at(x, y) = acc;
        }
    }
    return out;
}

RealImage convolve(const GrayImage& image, const Kernel& kernel) {
    return convolve(to_real(image), kernel);
}

}  // namespace vispath
