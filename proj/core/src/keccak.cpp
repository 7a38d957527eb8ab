#include "aascan/keccak.hpp"

#include <cstring>

namespace aascan {

namespace {

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr int kPiLane[24] = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                             15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};
constexpr int kRotation[24] = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                               27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};

inline uint64_t rotl64(uint64_t x, int n) { return (x << n) | (x >> (64 - n)); }

void keccak_f1600(uint64_t st[25]) {
    for (int round = 0; round < 24; ++round) {
        uint64_t bc[5];
        for (int i = 0; i < 5; ++i)
            bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        for (int i = 0; i < 5; ++i) {
            uint64_t t = bc[(i + 4) % 5] ^ rotl64(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
        }
        uint64_t t = st[1];
        for (int i = 0; i < 24; ++i) {
            int j = kPiLane[i];
            uint64_t tmp = st[j];
            st[j] = rotl64(t, kRotation[i]);
            t = tmp;
        }
        for (int j = 0; j < 25; j += 5) {
            uint64_t b[5];
            for (int i = 0; i < 5; ++i) b[i] = st[j + i];
            for (int i = 0; i < 5; ++i) st[j + i] = b[i] ^ (~b[(i + 1) % 5] & b[(i + 2) % 5]);
        }
        st[0] ^= kRoundConstants[round];
    }
}

inline void xor_block(uint64_t st[25], const uint8_t* block, size_t bytes) {
    for (size_t i = 0; i < bytes / 8; ++i) {
        uint64_t lane;
        std::memcpy(&lane, block + i * 8, 8);  // little-endian hosts only
        st[i] ^= lane;
    }
}

}  // namespace

Hash32 keccak256(std::span<const uint8_t> data) {
    constexpr size_t kRate = 136;  // 1088-bit rate, 512-bit capacity
    uint64_t st[25] = {};
    size_t offset = 0;
    while (data.size() - offset >= kRate) {
        xor_block(st, data.data() + offset, kRate);
        keccak_f1600(st);
        offset += kRate;
    }
    uint8_t last[kRate] = {};
    size_t rem = data.size() - offset;
    if (rem > 0) std::memcpy(last, data.data() + offset, rem);
    last[rem] ^= 0x01;
    last[kRate - 1] ^= 0x80;
    xor_block(st, last, kRate);
    keccak_f1600(st);

    Hash32 out;
    std::memcpy(out.bytes.data(), st, 32);
    return out;
}

Hash32 keccak256(std::string_view text) {
    return keccak256(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

}  // namespace aascan
