#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace splash {

/// One simulation snapshot as written to disk. Scalars are stored in binary32
/// on the wire; the header is 32 bytes, and every field is little-endian
/// regardless of host.
struct Frame {
    static constexpr std::uint32_t kVersion = 1;
    static constexpr char kMagic[4] = {'S', 'P', 'L', 'F'};

    std::uint64_t step = 0;
    double time = 0;
    std::uint32_t nx = 0, ny = 0;
    std::vector<float> heights;  // nx*ny, row-major (j outer, i inner)
    std::vector<float> mesh_z;   // (nx-1)*(ny-1), row-major

    struct ParticleState {
        float x, y, z, vx, vy, vz, volume;
        bool operator==(const ParticleState&) const = default;
    };
    std::vector<ParticleState> particles;

    struct ObjectState {
        float s, s_dot, f_o, contact_area;
        bool operator==(const ObjectState&) const = default;
    };
    std::vector<ObjectState> objects;

    bool operator==(const Frame&) const = default;
};

struct FrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace frame {

/// Serialize to the binary wire format.
std::vector<std::uint8_t> write_binary(const Frame& f);

/// Parse a binary frame; throws FrameError on truncation or a bad header.
Frame read_binary(const std::uint8_t* data, std::size_t size);
Frame read_binary(const std::vector<std::uint8_t>& bytes);

/// Same content as a human-readable dump (debug format).
std::string write_text(const Frame& f);

}  // namespace frame
}  // namespace splash
