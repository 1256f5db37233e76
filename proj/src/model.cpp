#include "aoisim/model.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace aoisim {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

} // namespace

void NetworkConfig::validate() const {
    require(n_streams >= 1, "n_streams must be >= 1");
    const auto n = static_cast<std::size_t>(n_streams);
    require(channel_reliability.size() == n, "channel_reliability must have n_streams entries");
    require(arrival_rate.size() == n, "arrival_rate must have n_streams entries");
    require(weight.size() == n, "weight must have n_streams entries");
    for (std::size_t i = 0; i < n; ++i) {
        const double p = channel_reliability[i];
        const double lam = arrival_rate[i];
        const double w = weight[i];
        require(std::isfinite(p) && p > 0.0 && p <= 1.0,
                "channel_reliability[" + std::to_string(i) + "] must be in (0,1]");
        require(std::isfinite(lam) && lam > 0.0 && lam <= 1.0,
                "arrival_rate[" + std::to_string(i) + "] must be in (0,1]");
        require(std::isfinite(w) && w > 0.0, "weight[" + std::to_string(i) + "] must be > 0");
    }
    require(horizon >= 1, "horizon must be >= 1");
}

const char* discipline_name(QueueDiscipline d) {
    switch (d) {
    case QueueDiscipline::Fifo: return "fifo";
    case QueueDiscipline::SinglePacket: return "single";
    case QueueDiscipline::NoQueue: return "noqueue";
    }
    return "?";
}

std::optional<QueueDiscipline> discipline_from_name(const std::string& name) {
    if (name == "fifo") return QueueDiscipline::Fifo;
    if (name == "single") return QueueDiscipline::SinglePacket;
    if (name == "noqueue") return QueueDiscipline::NoQueue;
    return std::nullopt;
}

void apply_arrival(StreamState& state, QueueDiscipline discipline, std::int64_t slot) {
    switch (discipline) {
    case QueueDiscipline::Fifo:
        state.queue.push_back(Packet{slot});
        break;
    case QueueDiscipline::SinglePacket:
    case QueueDiscipline::NoQueue:
        state.queue.clear();
        state.queue.push_back(Packet{slot});
        break;
    }
}

void advance_slot_into(std::vector<StreamState>& states, const NetworkConfig& config,
                       QueueDiscipline discipline, std::optional<int> decision,
                       std::span<const std::uint8_t> arrivals,
                       std::span<const std::uint8_t> channels, std::int64_t slot,
                       SlotEvents& events) {
    const auto n = static_cast<std::size_t>(config.n_streams);
    assert(states.size() == n && arrivals.size() == n && channels.size() == n);

    events.arrivals.assign(arrivals.begin(), arrivals.end());
    events.channel_on.assign(channels.begin(), channels.end());
    events.delivered.assign(n, 0);
    events.scheduled = decision;

    std::optional<std::size_t> delivered_to;
    if (decision.has_value()) {
        const auto u = static_cast<std::size_t>(*decision);
        assert(u < n);
        if (states[u].has_packet() && channels[u]) delivered_to = u;
    }

    for (std::size_t i = 0; i < n; ++i) {
        StreamState& s = states[i];
        if (delivered_to == i) {
            const Packet hol = s.queue.front();
            // The disciplines in scope only ever hold strictly fresher packets.
            assert(hol.arrival_slot > s.last_delivered_arrival);
            events.delivered[i] = 1;
            s.aoi = (slot - hol.arrival_slot) + 1;
            s.last_delivered_arrival = hol.arrival_slot;
            s.queue.pop_front();
        } else {
            s.aoi += 1;
        }
        if (discipline == QueueDiscipline::NoQueue) s.queue.clear();
    }
}

SlotEvents advance_slot(std::vector<StreamState>& states, const NetworkConfig& config,
                        QueueDiscipline discipline, std::optional<int> decision,
                        std::span<const std::uint8_t> arrivals,
                        std::span<const std::uint8_t> channels, std::int64_t slot) {
    SlotEvents events;
    advance_slot_into(states, config, discipline, decision, arrivals, channels, slot, events);
    return events;
}

std::vector<StreamState> initial_states(const NetworkConfig& config) {
    return std::vector<StreamState>(static_cast<std::size_t>(config.n_streams));
}

} // namespace aoisim
