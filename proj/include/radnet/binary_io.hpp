// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

// Little-endian primitives shared by the RDR1/RDT1/RDW1 containers.
namespace radnet::io {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LeWriter {
public:
    explicit LeWriter(std::ostream& os) : os_(os) {}

    void magic(std::string_view m) { os_.write(m.data(), static_cast<std::streamsize>(m.size())); }

    void u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }

    void u32(std::uint32_t v) {
        std::array<char, 4> b{};
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        os_.write(b.data(), 4);
    }

    void u64(std::uint64_t v) {
        std::array<char, 8> b{};
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        os_.write(b.data(), 8);
    }

    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    void f32s(std::span<const float> v) {
        if constexpr (std::endian::native == std::endian::little) {
            os_.write(reinterpret_cast<const char*>(v.data()),
                      static_cast<std::streamsize>(v.size_bytes()));
        } else {
            for (float x : v) f32(x);
        }
    }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        os_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    void check() const {
        if (!os_) throw std::runtime_error("write failed");
    }

private:
    std::ostream& os_;
};

class LeReader {
public:
    explicit LeReader(std::istream& is) : is_(is) {}

    void expect_magic(std::string_view m) {
        std::string got(m.size(), '\0');
        read(got.data(), got.size());
        if (got != m) throw FormatError("bad magic: expected " + std::string(m));
    }

    std::uint8_t u8() {
        char c = 0;
        read(&c, 1);
        return static_cast<std::uint8_t>(c);
    }

    std::uint32_t u32() {
        std::array<unsigned char, 4> b{};
        read(reinterpret_cast<char*>(b.data()), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        std::array<unsigned char, 8> b{};
        read(reinterpret_cast<char*>(b.data()), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }

    float f32() { return std::bit_cast<float>(u32()); }

    void f32s(std::span<float> out) {
        if constexpr (std::endian::native == std::endian::little) {
            read(reinterpret_cast<char*>(out.data()), out.size_bytes());
        } else {
            for (auto& x : out) x = f32();
        }
    }

    std::string str(std::uint32_t max_len = 1u << 20) {
        const auto n = u32();
        if (n > max_len) throw FormatError("string field too long");
        std::string s(n, '\0');
        read(s.data(), n);
        return s;
    }

    bool at_eof() { return is_.peek() == std::char_traits<char>::eof(); }

private:
    void read(char* dst, std::size_t n) {
        is_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(is_.gcount()) != n) throw FormatError("truncated file");
    }

    std::istream& is_;
};

}  // namespace radnet::io
