#pragma once

#include "lazydist/types.h"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

namespace lazydist {

/// Cost model for simulated transfers. A message of `size` bytes posted at time t completes at
///   start + alpha + size / beta,  start = serialize_links ? max(t, link_free) : t
/// and, with serialization, occupies its (src, dst) link until that completion time.
struct latency_model {
	double alpha = 1000.0;
	double beta = 32.0; ///< bytes per time unit; infinity disables the bandwidth term
	bool serialize_links = false;
	double compute_cost = 0.25; ///< virtual time per element of computation

	static constexpr double infinite_bandwidth = std::numeric_limits<double>::infinity();
};

/// Identifies a transfer. `transfer` is unique per runtime and disambiguates repeated transfers of
/// the same range; the remaining fields describe what is being moved.
struct message_tag {
	std::uint64_t transfer = 0;
	std::uint64_t array = 0;
	index_t block = 0;
	region range;

	friend bool operator==(const message_tag&, const message_tag&) = default;
};

using handle_id = std::uint64_t;

enum class handle_state { in_flight, complete, consumed };

struct transport_stats {
	std::uint64_t messages = 0;
	std::uint64_t bytes = 0;
};

/// Deterministic simulated message passing among P ranks, each with its own virtual clock.
///
/// Sends are eager: they complete when their data arrives, independently of the receiver.
/// A receive completes at max(arrival of its matching send, its own post time); until the send is
/// posted the completion time is unknown.
class transport {
  public:
	transport(int nprocs, latency_model model);

	int nprocs() const { return static_cast<int>(m_clock.size()); }
	const latency_model& model() const { return m_model; }

	handle_id post_send(rank_t src, rank_t dst, message_tag tag, std::vector<std::byte> payload);
	/// Throws match_ambiguity_error if a receive for the same (src, dst, tag) is already posted.
	handle_id post_recv(rank_t dst, rank_t src, message_tag tag);

	/// Handles whose completion time is known and <= the owning rank's clock. Never advances time.
	std::vector<handle_id> test_complete(std::span<const handle_id> handles) const;
	/// Earliest known completion time among `handles`, if any is known.
	std::optional<double> earliest_completion(std::span<const handle_id> handles) const;
	/// Advances `rank`'s clock to the earliest known completion among `handles` and accounts the
	/// advance as wait time. Throws deadlock_error if no completion time is known.
	handle_id wait_any(rank_t rank, std::span<const handle_id> handles);

	void advance_compute(rank_t rank, double cost);
	/// Moves a clock forward without accounting wait or compute (barriers, idle).
	void advance_idle(rank_t rank, double to);

	std::optional<double> completion_time(handle_id h) const;
	handle_state state(handle_id h) const;
	rank_t owner(handle_id h) const;
	bool is_complete(handle_id h) const;

	/// Marks a completed handle consumed; for receives, returns the delivered payload.
	std::vector<std::byte> consume(handle_id h);

	double clock(rank_t rank) const { return m_clock.at(rank); }
	double wait_time(rank_t rank) const { return m_wait.at(rank); }
	double compute_time(rank_t rank) const { return m_compute.at(rank); }
	double idle_time(rank_t rank) const { return m_idle.at(rank); }
	double makespan() const;
	const transport_stats& stats() const { return m_stats; }

	/// True iff every posted message has been matched and every handle consumed.
	bool quiescent() const;

  private:
	struct handle_rec {
		rank_t owner;
		bool is_send;
		std::optional<double> completion;
		handle_state state = handle_state::in_flight;
		std::vector<std::byte> payload;
		std::optional<handle_id> peer;
		double post_time;
	};
	using match_key = std::tuple<rank_t, rank_t, std::uint64_t>;

	void check_rank(rank_t r) const;
	const handle_rec& rec(handle_id h) const;

	latency_model m_model;
	std::vector<double> m_clock, m_wait, m_compute, m_idle;
	std::map<std::pair<rank_t, rank_t>, double> m_link_free;
	std::vector<handle_rec> m_handles;
	std::map<match_key, handle_id> m_unmatched_sends, m_unmatched_recvs;
	transport_stats m_stats;
};

} // namespace lazydist
