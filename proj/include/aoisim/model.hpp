#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aoisim {

// Instance of the broadcast network: N streams, per-stream channel ON
// probability p_i, Bernoulli arrival rate lambda_i and priority weight w_i,
// plus the horizon and master seed of a simulation run.
struct NetworkConfig {
    int n_streams = 0;
    std::vector<double> channel_reliability; // p_i in (0,1]
    std::vector<double> arrival_rate;        // lambda_i in (0,1]
    std::vector<double> weight;              // w_i > 0
    std::int64_t horizon = 0;                // slots, >= 1
    std::uint64_t seed = 0;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Per-stream queueing discipline. Every run binds one discipline to all queues.
enum class QueueDiscipline {
    Fifo,         // serve in order of arrival, unbounded backlog
    SinglePacket, // a new arrival replaces anything older
    NoQueue,      // a packet is transmittable only in its arrival slot
};

const char* discipline_name(QueueDiscipline d);
std::optional<QueueDiscipline> discipline_from_name(const std::string& name);

struct Packet {
    std::int64_t arrival_slot = 0; // >= 1
};

// Runtime state of one stream. The age starts at 1; queued packets are always
// strictly fresher than the last delivered one.
struct StreamState {
    std::int64_t aoi = 1;
    std::deque<Packet> queue;
    std::int64_t last_delivered_arrival = 0;

    bool has_packet() const { return !queue.empty(); }
    // System time of the head-of-line packet at slot t. Queue must be non-empty.
    std::int64_t system_time(std::int64_t slot) const { return slot - queue.front().arrival_slot; }
};

// Everything that happened in one slot.
struct SlotEvents {
    std::vector<std::uint8_t> arrivals;
    std::optional<int> scheduled; // the stream picked by the policy, if any
    std::vector<std::uint8_t> channel_on;
    std::vector<std::uint8_t> delivered;
};

// Enqueue one arriving packet. FIFO appends; the other disciplines keep only
// the new packet.
void apply_arrival(StreamState& state, QueueDiscipline discipline, std::int64_t slot);

// Advance all streams through the tail of slot `slot`: resolve the
// transmission (if `decision` names a stream with a packet and its channel is
// ON), update every age for the next slot, and apply end-of-slot queue rules.
// Arrival bits must already have been applied via apply_arrival; they are
// echoed into the returned events. A decision naming an empty queue is not an
// error: the station idles.
void advance_slot_into(std::vector<StreamState>& states, const NetworkConfig& config,
                       QueueDiscipline discipline, std::optional<int> decision,
                       std::span<const std::uint8_t> arrivals,
                       std::span<const std::uint8_t> channels, std::int64_t slot,
                       SlotEvents& events);

SlotEvents advance_slot(std::vector<StreamState>& states, const NetworkConfig& config,
                        QueueDiscipline discipline, std::optional<int> decision,
                        std::span<const std::uint8_t> arrivals,
                        std::span<const std::uint8_t> channels, std::int64_t slot);

std::vector<StreamState> initial_states(const NetworkConfig& config);

} // namespace aoisim
