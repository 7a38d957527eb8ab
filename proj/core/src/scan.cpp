#include "aascan/scan.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace aascan {
namespace {

using nlohmann::json;

}  // namespace

std::string direction_to_string(Direction d) {
    switch (d) {
        case Direction::Forward: return "forward";
        case Direction::Backward: return "backward";
    }
    throw std::invalid_argument("unknown direction value");
}

Direction direction_from_string(std::string_view s) {
    if (s == "forward") return Direction::Forward;
    if (s == "backward") return Direction::Backward;
    throw std::invalid_argument("unknown direction: " + std::string(s));
}

ScanCheckpoint ScanCheckpoint::fresh(uint64_t range_start, uint64_t range_end,
                                     Direction direction, bool fixture_mode) {
    ScanCheckpoint cp;
    cp.range_start = range_start;
    cp.range_end = range_end;
    cp.direction = direction;
    cp.fixture_mode = fixture_mode;
    cp.next_block = direction == Direction::Forward ? range_start : range_end;
    cp.completed = false;
    cp.validate();
    return cp;
}

ScanCheckpoint ScanCheckpoint::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw CheckpointError("corrupt checkpoint " + path + ": " + e.what());
    }

    ScanCheckpoint cp;
    try {
        cp.range_start = j.at("range_start").get<uint64_t>();
        cp.range_end = j.at("range_end").get<uint64_t>();
        cp.direction = direction_from_string(j.at("direction").get<std::string>());
        cp.fixture_mode = j.at("fixture_mode").get<bool>();
        cp.next_block = j.at("next_block").get<uint64_t>();
        cp.completed = j.at("completed").get<bool>();
    } catch (const json::exception& e) {
        throw CheckpointError("corrupt checkpoint " + path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw CheckpointError("corrupt checkpoint " + path + ": " + e.what());
    }
    cp.validate();
    return cp;
}

void ScanCheckpoint::save_file(const std::string& path) const {
    const json j{
        {"range_start", range_start},
        {"range_end", range_end},
        {"direction", direction_to_string(direction)},
        {"fixture_mode", fixture_mode},
        {"next_block", next_block},
        {"completed", completed},
    };
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint: " + tmp);
        out << j.dump() << '\n';
        out.flush();
        if (!out) throw CheckpointError("checkpoint write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw CheckpointError("cannot replace checkpoint: " + path);
    }
}

void ScanCheckpoint::validate() const {
    if (range_start > range_end) {
        throw CheckpointError("checkpoint range is inverted");
    }
    if (next_block < range_start || next_block > range_end + 1) {
        throw CheckpointError("checkpoint cursor outside its range");
    }
}

std::optional<uint64_t> ScanCheckpoint::current() const {
    if (completed) return std::nullopt;
    return next_block;
}

void ScanCheckpoint::advance() {
    if (completed) return;
    if (direction == Direction::Forward) {
        if (next_block >= range_end) {
            next_block = range_end + 1;
            completed = true;
        } else {
            ++next_block;
        }
    } else {
        if (next_block <= range_start) {
            completed = true;  // cursor stays clamped at range_start
        } else {
            --next_block;
        }
    }
}

RawBlock FixtureSource::fetch(uint64_t number) {
    auto block = index_.get(number);
    if (!block) {
        throw NotFoundError("block " + std::to_string(number) + " not in " + describe());
    }
    return *block;
}

Traversal::Traversal(BlockSource& source, uint64_t range_start, uint64_t range_end,
                     Direction direction, std::string checkpoint_path, TraversalOptions opts)
    : source_(source), checkpoint_path_(std::move(checkpoint_path)), opts_(opts) {
    if (opts_.prefetch == 0) opts_.prefetch = 1;

    const bool is_fixture = dynamic_cast<FixtureSource*>(&source_) != nullptr;
    ScanCheckpoint fresh =
        ScanCheckpoint::fresh(range_start, range_end, direction, is_fixture);

    bool resumed = false;
    if (!opts_.reset && !checkpoint_path_.empty()) {
        std::ifstream probe(checkpoint_path_);
        if (probe.good()) {
            ScanCheckpoint existing = ScanCheckpoint::load_file(checkpoint_path_);
            if (existing.range_start != fresh.range_start ||
                existing.range_end != fresh.range_end ||
                existing.direction != fresh.direction) {
                throw CheckpointError(
                    "checkpoint " + checkpoint_path_ +
                    " belongs to a different scan; pass reset to discard it");
            }
            checkpoint_ = existing;
            resumed = true;
        }
    }
    if (!resumed) checkpoint_ = fresh;
    fetch_cursor_ = checkpoint_;
}

void Traversal::fill_window() {
    while (window_.size() < opts_.prefetch) {
        const auto number = fetch_cursor_.current();
        if (!number) break;
        window_.emplace_back(*number, std::async(std::launch::async, [this, n = *number] {
                                 return source_.fetch(n);
                             }));
        fetch_cursor_.advance();
    }
}

std::optional<RawBlock> Traversal::next() {
    if (delivered_uncommitted_) {
        throw std::logic_error("next() called again before commit()");
    }
    if (!checkpoint_.current()) return std::nullopt;
    fill_window();
    auto [number, future] = std::move(window_.front());
    window_.pop_front();
    RawBlock block = future.get();
    if (block.number != number) {
        throw RpcDecodeError("asked for block " + std::to_string(number) + ", got " +
                             std::to_string(block.number));
    }
    delivered_uncommitted_ = true;
    return block;
}

void Traversal::commit() {
    if (!delivered_uncommitted_) {
        throw std::logic_error("commit() without a pending block");
    }
    delivered_uncommitted_ = false;
    checkpoint_.advance();
    if (!checkpoint_path_.empty()) checkpoint_.save_file(checkpoint_path_);
}

}  // namespace aascan
