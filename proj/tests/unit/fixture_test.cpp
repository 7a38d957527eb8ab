#include "aascan/fixture.hpp"

#include "aascan/hex.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aascan;

namespace {

RawBlock make_block(uint64_t number, int txs = 2) {
    RawBlock b;
    b.number = number;
    b.timestamp = 1700000000 + int64_t(number) * 2;
    b.coinbase.bytes[19] = 0xc0;
    for (int i = 0; i < txs; ++i) {
        RawTransaction tx;
        tx.hash.bytes[0] = static_cast<uint8_t>(number);
        tx.hash.bytes[31] = static_cast<uint8_t>(i);
        tx.index = static_cast<uint32_t>(i);
        tx.from.bytes[19] = 0xaa;
        if (i % 2 == 0) {
            Address to;
            to.bytes[19] = 0xbb;
            tx.to = to;
        }
        tx.value = TokenAmount{BigInt(i) * pow10(18), 18};
        tx.gas_used = 21000 + uint64_t(i);
        tx.effective_gas_price = BigInt("113000000051");
        tx.status = i % 3 == 2 ? TxStatus::Failure : TxStatus::Success;

        RawLog log;
        log.emitter.bytes[19] = 0x70;
        log.topics.push_back(Hash32::from_hex(
            "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef"));
        log.data.assign(32, 0x01);
        log.log_index = static_cast<uint32_t>(i);
        tx.logs.push_back(log);
        b.transactions.push_back(std::move(tx));
    }
    return b;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("block line round trip") {
    const RawBlock b = make_block(48990123, 3);
    const std::string line = block_to_line(b);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(block_from_line(line) == b);
    CHECK(block_to_line(block_from_line(line)) == line);
}

TEST_CASE("block line uses rpc hex forms") {
    RawBlock b = make_block(255, 1);
    b.transactions[0].effective_gas_price = BigInt("340282366920938463463374607431768211456");
    const std::string line = block_to_line(b);
    CHECK(line.find("\"number\":\"0xff\"") != std::string::npos);
    CHECK(line.find("\"transactionIndex\":\"0x0\"") != std::string::npos);
    // 2^128, bit-exact through the codec
    CHECK(line.find("\"effectiveGasPrice\":\"0x100000000000000000000000000000000\"") !=
          std::string::npos);
    CHECK(block_from_line(line).transactions[0].effective_gas_price ==
          b.transactions[0].effective_gas_price);
}

TEST_CASE("contract creation serializes a null callee") {
    RawBlock b = make_block(1, 1);
    b.transactions[0].to = std::nullopt;
    const std::string line = block_to_line(b);
    CHECK(line.find("\"to\":null") != std::string::npos);
    CHECK_FALSE(block_from_line(line).transactions[0].to.has_value());
}

TEST_CASE("fixture store and load") {
    const std::vector<RawBlock> blocks{make_block(10), make_block(11, 0), make_block(12, 4)};
    const auto path = temp_path("fixture_rt.jsonl");
    store_fixture(blocks, path);
    CHECK(load_fixture(path) == blocks);

    // identical content stores to identical bytes
    const auto path2 = temp_path("fixture_rt2.jsonl");
    store_fixture(blocks, path2);
    std::ifstream a(path, std::ios::binary), c(path2, std::ios::binary);
    std::stringstream sa, sc;
    sa << a.rdbuf();
    sc << c.rdbuf();
    CHECK(sa.str() == sc.str());
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("fixture loader skips blank lines") {
    const auto path = temp_path("fixture_blank.jsonl");
    {
        std::ofstream out(path);
        out << block_to_line(make_block(5)) << "\n\n" << block_to_line(make_block(6)) << '\n';
    }
    CHECK(load_fixture(path).size() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("fixture loader names the offending line") {
    const auto path = temp_path("fixture_bad.jsonl");
    {
        std::ofstream out(path);
        out << block_to_line(make_block(5)) << '\n';
        out << block_to_line(make_block(6)).substr(0, 40) << '\n';
    }
    try {
        load_fixture(path);
        FAIL("expected FixtureError");
    } catch (const FixtureError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_fixture(temp_path("no_such_fixture.jsonl")), FixtureError);
    CHECK_THROWS_AS(block_from_line("{}"), FixtureError);
    CHECK_THROWS_AS(block_from_line(R"({"number":"0x1","timestamp":"0x1","miner":"0xzz",)"
                                    R"("transactions":[]})"),
                    FixtureError);
}

TEST_CASE("fixture loader rejects non-monotone block numbers") {
    const auto path = temp_path("fixture_mono.jsonl");
    {
        std::ofstream out(path);
        out << block_to_line(make_block(5)) << '\n'
            << block_to_line(make_block(7)) << '\n'
            << block_to_line(make_block(6)) << '\n';
    }
    CHECK_THROWS_AS(load_fixture(path), FixtureError);

    {
        std::ofstream out(path, std::ios::trunc);
        out << block_to_line(make_block(5)) << '\n' << block_to_line(make_block(5)) << '\n';
    }
    CHECK_THROWS_AS(load_fixture(path), FixtureError);

    // descending fixtures are legal (reverse-direction scans)
    {
        std::ofstream out(path, std::ios::trunc);
        out << block_to_line(make_block(7)) << '\n'
            << block_to_line(make_block(6)) << '\n'
            << block_to_line(make_block(5)) << '\n';
    }
    CHECK(load_fixture(path).size() == 3);
    std::filesystem::remove(path);
}

TEST_CASE("fixture index") {
    FixtureIndex index({make_block(10), make_block(12), make_block(11)});
    CHECK(index.size() == 3);
    CHECK(index.min_block() == 10);
    CHECK(index.max_block() == 12);
    REQUIRE(index.get(11).has_value());
    CHECK(index.get(11)->number == 11);
    CHECK_FALSE(index.get(13).has_value());

    const FixtureIndex empty{std::vector<RawBlock>{}};
    CHECK(empty.size() == 0);
    CHECK_THROWS_AS(empty.min_block(), FixtureError);
    CHECK_THROWS_AS(empty.max_block(), FixtureError);
}
