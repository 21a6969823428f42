#pragma once

#include "lazydist/types.h"

#include <functional>

namespace lazydist {

/// Identifies one dependency-list: a base-block of an array, or a private staging buffer that
/// holds transferred elements on the receiving rank.
struct block_key {
	static constexpr std::uint64_t staging_space = 0;

	std::uint64_t space = 0; ///< array id, or staging_space
	index_t index = 0;       ///< base-block number, or staging buffer id

	bool is_staging() const { return space == staging_space; }

	friend bool operator==(const block_key&, const block_key&) = default;
	friend auto operator<=>(const block_key&, const block_key&) = default;
};

inline block_key staging_key(index_t id) { return block_key{block_key::staging_space, id}; }

std::string to_string(const block_key& k);

enum class access_mode { read, write };

/// One read or write of an element range within one block.
struct access {
	block_key block;
	region range;
	access_mode mode = access_mode::read;
};

/// Two accesses conflict iff they touch the same block, their ranges share an element, and at
/// least one of them writes.
bool conflict(const access& a, const access& b);

} // namespace lazydist

template <>
struct std::hash<lazydist::block_key> {
	std::size_t operator()(const lazydist::block_key& k) const noexcept {
		return std::hash<std::uint64_t>{}(k.space * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(k.index));
	}
};
