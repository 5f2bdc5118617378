#include "gqt/media_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <png.h>

#include "gqt/errors.hpp"
#include "gqt/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "QT3/QM3 serialization assumes a little-endian host");

namespace fs = std::filesystem;

namespace gqt {

namespace {

constexpr char kQt3Magic[4] = {'Q', 'T', '3', '\0'};
constexpr char kQm3Magic[4] = {'Q', 'M', '3', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T& v, const std::string& path) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Malformed("truncated file: " + path);
}

void check_header(std::istream& is, const char (&magic)[4], const std::string& path) {
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0) throw Malformed("bad magic: " + path);
    std::uint32_t version;
    read_pod(is, version, path);
    if (version != kFormatVersion) throw Malformed("unsupported version: " + path);
}

std::uint64_t read_dim(std::istream& is, const std::string& path) {
    std::uint64_t v;
    read_pod(is, v, path);
    if (v == 0 || v > (1ull << 32)) throw Malformed("implausible dimension: " + path);
    return v;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

void read_png_rgb(const std::string& path, int& height, int& width,
                  std::vector<unsigned char>& rgb) {
    PngReadCloser c;
    c.fp = std::fopen(path.c_str(), "rb");
    if (!c.fp) throw IoError("cannot open " + path);
    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    c.info = png_create_info_struct(c.png);
    if (!c.png || !c.info) throw IoError("libpng init failed");
    if (setjmp(png_jmpbuf(c.png))) throw Malformed("corrupt PNG: " + path);
    png_init_io(c.png, c.fp);
    png_read_info(c.png, c.info);

    png_set_strip_16(c.png);
    png_set_palette_to_rgb(c.png);
    png_set_expand_gray_1_2_4_to_8(c.png);
    png_set_gray_to_rgb(c.png);
    png_set_strip_alpha(c.png);
    png_read_update_info(c.png, c.info);

    height = int(png_get_image_height(c.png, c.info));
    width = int(png_get_image_width(c.png, c.info));
    if (png_get_rowbytes(c.png, c.info) != std::size_t(width) * 3)
        throw Malformed("unexpected PNG row layout: " + path);
    rgb.resize(std::size_t(height) * width * 3);
    std::vector<png_bytep> rows(height);
    for (int i = 0; i < height; ++i) rows[i] = rgb.data() + std::size_t(i) * width * 3;
    png_read_image(c.png, rows.data());
    png_read_end(c.png, nullptr);
}

void write_png_rgb(const std::string& path, int height, int width,
                   const std::vector<unsigned char>& rgb) {
    PngWriteCloser c;
    c.fp = std::fopen(path.c_str(), "wb");
    if (!c.fp) throw IoError("cannot open " + path + " for writing");
    c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    c.info = png_create_info_struct(c.png);
    if (!c.png || !c.info) throw IoError("libpng init failed");
    if (setjmp(png_jmpbuf(c.png))) throw IoError("PNG write failed: " + path);
    png_init_io(c.png, c.fp);
    png_set_IHDR(c.png, c.info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(c.png, c.info);
    std::vector<png_bytep> rows(height);
    for (int i = 0; i < height; ++i)
        rows[i] = const_cast<png_bytep>(rgb.data() + std::size_t(i) * width * 3);
    png_write_image(c.png, rows.data());
    png_write_end(c.png, nullptr);
}

} // namespace

QTensor3 encode_quaternion(const VideoTensor& V) {
    QTensor3 T(V.n1, V.n2, V.n3);
    for (std::size_t t = 0; t < T.data().size(); ++t)
        T.data()[t] = {0.0, V.R[t], V.G[t], V.B[t]};
    return T;
}

VideoTensor decode_quaternion(const QTensor3& T, std::size_t* clamp_count) {
    for (const auto& q : T.data())
        if (std::abs(q.w) > 1e-9)
            throw ImpureTensor("decode_quaternion: tensor has a nonzero real part");
    VideoTensor V(T.n1(), T.n2(), T.n3());
    std::size_t clamped = 0;
    auto clamp01 = [&](double v) {
        if (v < 0.0 || v > 1.0) ++clamped;
        return std::clamp(v, 0.0, 1.0);
    };
    for (std::size_t t = 0; t < T.data().size(); ++t) {
        const Quaternion& q = T.data()[t];
        V.R[t] = clamp01(q.x);
        V.G[t] = clamp01(q.y);
        V.B[t] = clamp01(q.z);
    }
    if (clamp_count) *clamp_count = clamped;
    return V;
}

ObservationMask sample_mask(int n1, int n2, int n3, double rho, std::uint64_t seed) {
    if (rho < 0.0 || rho > 1.0) throw ConfigError("sample_mask: rho outside [0,1]");
    const std::uint64_t total = std::uint64_t(n1) * n2 * n3;
    const std::uint64_t m = std::uint64_t(std::llround(rho * double(total)));

    // Partial Fisher-Yates over the linear pixel indices; the first m slots
    // after shuffling are the observed set.
    std::vector<std::uint64_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    for (std::uint64_t t = 0; t < m; ++t) {
        const std::uint64_t r = t + rng.next_below(total - t);
        std::swap(idx[t], idx[r]);
    }
    ObservationMask mask(n1, n2, n3);
    for (std::uint64_t t = 0; t < m; ++t) mask.raw()[idx[t]] = 1;
    return mask;
}

VideoTensor load_frames(const std::string& dir) {
    std::vector<std::pair<int, fs::path>> frames;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        int num;
        if (std::sscanf(name.c_str(), "frame_%d.png", &num) == 1)
            frames.emplace_back(num, e.path());
    }
    if (frames.empty()) throw IoError("no frame_*.png files in " + dir);
    std::sort(frames.begin(), frames.end());

    VideoTensor V;
    for (std::size_t k = 0; k < frames.size(); ++k) {
        int h, w;
        std::vector<unsigned char> rgb;
        read_png_rgb(frames[k].second.string(), h, w, rgb);
        if (k == 0) V = VideoTensor(h, w, int(frames.size()));
        else if (h != V.n1 || w != V.n2)
            throw InconsistentFrameSizes("frame size differs: " + frames[k].second.string());
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                const std::size_t p = (std::size_t(i) * w + j) * 3;
                const std::size_t t = V.idx(i, j, int(k));
                V.R[t] = rgb[p] / 255.0;
                V.G[t] = rgb[p + 1] / 255.0;
                V.B[t] = rgb[p + 2] / 255.0;
            }
    }
    return V;
}

void save_frames(const VideoTensor& V, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<unsigned char> rgb(std::size_t(V.n1) * V.n2 * 3);
    for (int k = 0; k < V.n3; ++k) {
        for (int i = 0; i < V.n1; ++i)
            for (int j = 0; j < V.n2; ++j) {
                const std::size_t p = (std::size_t(i) * V.n2 + j) * 3;
                const std::size_t t = V.idx(i, j, k);
                rgb[p] = (unsigned char)std::lround(std::clamp(V.R[t], 0.0, 1.0) * 255.0);
                rgb[p + 1] = (unsigned char)std::lround(std::clamp(V.G[t], 0.0, 1.0) * 255.0);
                rgb[p + 2] = (unsigned char)std::lround(std::clamp(V.B[t], 0.0, 1.0) * 255.0);
            }
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04d.png", k);
        write_png_rgb((fs::path(dir) / name).string(), V.n1, V.n2, rgb);
    }
}

QTensor3 read_qt3(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    check_header(is, kQt3Magic, path);
    const auto n1 = read_dim(is, path), n2 = read_dim(is, path), n3 = read_dim(is, path);
    QTensor3 T{int(n1), int(n2), int(n3)};
    is.read(reinterpret_cast<char*>(T.data().data()),
            std::streamsize(T.data().size() * sizeof(Quaternion)));
    if (!is) throw Malformed("truncated file: " + path);
    return T;
}

void write_qt3(const QTensor3& T, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kQt3Magic, 4);
    write_pod(os, kFormatVersion);
    write_pod(os, std::uint64_t(T.n1()));
    write_pod(os, std::uint64_t(T.n2()));
    write_pod(os, std::uint64_t(T.n3()));
    os.write(reinterpret_cast<const char*>(T.data().data()),
             std::streamsize(T.data().size() * sizeof(Quaternion)));
    if (!os) throw IoError("write failed: " + path);
}

ObservationMask read_mask(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    check_header(is, kQm3Magic, path);
    const auto n1 = read_dim(is, path), n2 = read_dim(is, path), n3 = read_dim(is, path);
    std::uint32_t id_len;
    read_pod(is, id_len, path);
    if (id_len > 256) throw Malformed("oversized generator id: " + path);
    std::string id(id_len, '\0');
    is.read(id.data(), id_len);
    if (!is) throw Malformed("truncated file: " + path);
    ObservationMask mask{int(n1), int(n2), int(n3)};
    is.read(reinterpret_cast<char*>(mask.raw().data()), std::streamsize(mask.raw().size()));
    if (!is) throw Malformed("truncated file: " + path);
    for (auto v : mask.raw())
        if (v > 1) throw Malformed("mask entries must be 0/1: " + path);
    return mask;
}

void write_mask(const ObservationMask& mask, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kQm3Magic, 4);
    write_pod(os, kFormatVersion);
    write_pod(os, std::uint64_t(mask.n1()));
    write_pod(os, std::uint64_t(mask.n2()));
    write_pod(os, std::uint64_t(mask.n3()));
    const std::uint32_t id_len = std::uint32_t(std::strlen(kMaskRngId));
    write_pod(os, id_len);
    os.write(kMaskRngId, id_len);
    os.write(reinterpret_cast<const char*>(mask.raw().data()),
             std::streamsize(mask.raw().size()));
    if (!os) throw IoError("write failed: " + path);
}

} // namespace gqt
