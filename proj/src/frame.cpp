#include "splash/frame.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>

namespace splash::frame {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 24));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(std::uint8_t(v >> (8 * k)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

struct Reader {
    const std::uint8_t* p;
    std::size_t left;

    void need(std::size_t n) const {
        if (left < n) throw FrameError("truncated frame");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
                          std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
        p += 4;
        left -= 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t(p[k]) << (8 * k);
        p += 8;
        left -= 8;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

std::vector<std::uint8_t> write_binary(const Frame& f) {
    std::vector<std::uint8_t> out;
    std::size_t mesh_n = f.nx >= 1 && f.ny >= 1 ? std::size_t(f.nx - 1) * (f.ny - 1) : 0;
    out.reserve(32 + 4 * (std::size_t(f.nx) * f.ny + mesh_n) + 8 + 28 * f.particles.size() +
                16 * f.objects.size());
    out.insert(out.end(), Frame::kMagic, Frame::kMagic + 4);
    put_u32(out, Frame::kVersion);
    put_u64(out, f.step);
    put_f64(out, f.time);
    put_u32(out, f.nx);
    put_u32(out, f.ny);
    for (float v : f.heights) put_f32(out, v);
    for (float v : f.mesh_z) put_f32(out, v);
    put_u32(out, std::uint32_t(f.particles.size()));
    for (const auto& q : f.particles) {
        put_f32(out, q.x);
        put_f32(out, q.y);
        put_f32(out, q.z);
        put_f32(out, q.vx);
        put_f32(out, q.vy);
        put_f32(out, q.vz);
        put_f32(out, q.volume);
    }
    put_u32(out, std::uint32_t(f.objects.size()));
    for (const auto& o : f.objects) {
        put_f32(out, o.s);
        put_f32(out, o.s_dot);
        put_f32(out, o.f_o);
        put_f32(out, o.contact_area);
    }
    return out;
}

Frame read_binary(const std::uint8_t* data, std::size_t size) {
    Reader r{data, size};
    r.need(4);
    if (std::memcmp(r.p, Frame::kMagic, 4) != 0) throw FrameError("bad frame magic");
    r.p += 4;
    r.left -= 4;
    std::uint32_t version = r.u32();
    if (version != Frame::kVersion) throw FrameError("unsupported frame version");

    Frame f;
    f.step = r.u64();
    f.time = r.f64();
    f.nx = r.u32();
    f.ny = r.u32();
    if (f.nx < 2 || f.ny < 2 || std::uint64_t(f.nx) * f.ny > (1u << 28))
        throw FrameError("implausible frame dimensions");

    f.heights.resize(std::size_t(f.nx) * f.ny);
    for (float& v : f.heights) v = r.f32();
    f.mesh_z.resize(std::size_t(f.nx - 1) * (f.ny - 1));
    for (float& v : f.mesh_z) v = r.f32();

    std::uint32_t np = r.u32();
    r.need(std::size_t(np) * 28);
    f.particles.resize(np);
    for (auto& q : f.particles) {
        q.x = r.f32();
        q.y = r.f32();
        q.z = r.f32();
        q.vx = r.f32();
        q.vy = r.f32();
        q.vz = r.f32();
        q.volume = r.f32();
    }
    std::uint32_t no = r.u32();
    r.need(std::size_t(no) * 16);
    f.objects.resize(no);
    for (auto& o : f.objects) {
        o.s = r.f32();
        o.s_dot = r.f32();
        o.f_o = r.f32();
        o.contact_area = r.f32();
    }
    if (r.left != 0) throw FrameError("trailing bytes after frame");
    return f;
}

Frame read_binary(const std::vector<std::uint8_t>& bytes) {
    return read_binary(bytes.data(), bytes.size());
}

std::string write_text(const Frame& f) {
    std::string out;
    char buf[160];
    auto emit = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
    };
    emit("frame step=%" PRIu64 " time=%.17g nx=%u ny=%u\n", f.step, f.time, f.nx, f.ny);
    out += "heights\n";
    for (std::uint32_t j = 0; j < f.ny; ++j) {
        for (std::uint32_t i = 0; i < f.nx; ++i)
            emit(i + 1 == f.nx ? "%.9g\n" : "%.9g ", double(f.heights[std::size_t(j) * f.nx + i]));
    }
    out += "mesh_z\n";
    std::uint32_t mx = f.nx - 1, my = f.ny - 1;
    for (std::uint32_t j = 0; j < my; ++j) {
        for (std::uint32_t i = 0; i < mx; ++i)
            emit(i + 1 == mx ? "%.9g\n" : "%.9g ", double(f.mesh_z[std::size_t(j) * mx + i]));
    }
    emit("particles %zu\n", f.particles.size());
    for (const auto& q : f.particles)
        emit("%.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", double(q.x), double(q.y), double(q.z),
             double(q.vx), double(q.vy), double(q.vz), double(q.volume));
    emit("objects %zu\n", f.objects.size());
    for (const auto& o : f.objects)
        emit("%.9g %.9g %.9g %.9g\n", double(o.s), double(o.s_dot), double(o.f_o),
             double(o.contact_area));
    return out;
}

}  // namespace splash::frame
