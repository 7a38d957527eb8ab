#include "aascan/delta.hpp"

#include <doctest.h>

#include <random>

using namespace aascan;

namespace {

Address addr(uint8_t tag) {
    Address a;
    a.bytes[19] = tag;
    return a;
}

}  // namespace

TEST_CASE("zero contributions never appear") {
    DeltaVector d;
    d.add(addr(1), BigInt(0));
    CHECK(d.empty());
    d.add(addr(1), BigInt(5));
    d.add(addr(1), BigInt(-5));
    CHECK(d.empty());
    CHECK(d == DeltaVector{});
}

TEST_CASE("adds accumulate per token") {
    DeltaVector d;
    d.add(addr(1), BigInt(10));
    d.add(addr(2), BigInt(-3));
    d.add(addr(1), BigInt(7));
    CHECK(d.size() == 2);
    CHECK(d.entries().at(addr(1)) == 17);
    CHECK(d.entries().at(addr(2)) == -3);
}

TEST_CASE("merge equals element-wise sum") {
    DeltaVector a, b;
    a.add(addr(1), BigInt(5));
    a.add(addr(2), BigInt(-2));
    b.add(addr(2), BigInt(2));
    b.add(addr(3), BigInt(1));
    const DeltaVector sum = delta_add(a, b);
    CHECK(sum.entries().at(addr(1)) == 5);
    CHECK(sum.entries().count(addr(2)) == 0);
    CHECK(sum.entries().at(addr(3)) == 1);
}

TEST_CASE("merge is commutative and associative") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        DeltaVector a, b, c;
        for (int i = 0; i < 10; ++i) {
            a.add(addr(rng() % 5), BigInt(static_cast<int64_t>(rng() % 21) - 10));
            b.add(addr(rng() % 5), BigInt(static_cast<int64_t>(rng() % 21) - 10));
            c.add(addr(rng() % 5), BigInt(static_cast<int64_t>(rng() % 21) - 10));
        }
        CHECK(delta_add(a, b) == delta_add(b, a));
        CHECK(delta_add(delta_add(a, b), c) == delta_add(a, delta_add(b, c)));
    }
}
