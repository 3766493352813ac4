#include "pianoaug/midi.hpp"

#include "pianoaug/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

namespace pianoaug::midi {

namespace {

constexpr std::uint32_t kDefaultTempo = 500000;

class Reader {
public:
    Reader(std::span<const std::uint8_t> data, Errc on_short) : data_(data), on_short_(on_short) {}

    bool done() const { return pos_ >= data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint8_t peek() {
        need(1);
        return data_[pos_];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
        pos_ += 4;
        return v;
    }
    std::uint32_t vlq() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            const std::uint8_t b = u8();
            v = v << 7 | (b & 0x7f);
            if (!(b & 0x80)) return v;
        }
        throw Error(Errc::MalformedTrack, "variable-length quantity longer than 4 bytes");
    }
    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    void need(std::size_t n) const {
        if (remaining() < n) throw Error(on_short_, "unexpected end of data");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    Errc on_short_;
};

enum class Kind { NoteOff = 0, NoteOn = 1 };

struct RawNote {
    std::int64_t tick;
    Kind kind;
    int channel;
    int pitch;
    int velocity;
    std::size_t order;  // file order, for a stable merge across tracks
};

void read_track(std::span<const std::uint8_t> body, std::vector<RawNote>& notes, std::vector<TempoEntry>& tempos,
                std::size_t& order) {
    Reader r(body, Errc::TruncatedTrack);
    std::int64_t tick = 0;
    int running = -1;
    while (!r.done()) {
        tick += r.vlq();
        int status = r.peek();
        if (status & 0x80) {
            r.u8();
        } else {
            if (running < 0) throw Error(Errc::MalformedTrack, fmt::format("data byte without running status at tick {}", tick));
            status = running;
        }

        if (status == 0xff) {
            const int type = r.u8();
            const auto len = r.vlq();
            auto payload = r.take(len);
            if (type == 0x51 && len == 3) {
                const std::uint32_t us = static_cast<std::uint32_t>(payload[0] << 16 | payload[1] << 8 | payload[2]);
                if (us > 0) tempos.push_back({tick, us});
            } else if (type == 0x2f) {
                return;
            }
            continue;
        }
        if (status == 0xf0 || status == 0xf7) {
            r.take(r.vlq());
            running = -1;
            continue;
        }
        if (status >= 0xf0) throw Error(Errc::MalformedTrack, fmt::format("system message 0x{:02x} in track", status));

        running = status;
        const int type = status & 0xf0;
        const int channel = status & 0x0f;
        const int data_len = (type == 0xc0 || type == 0xd0) ? 1 : 2;
        std::array<int, 2> d{0, 0};
        for (int i = 0; i < data_len; ++i) {
            d[i] = r.u8();
            if (d[i] & 0x80) throw Error(Errc::MalformedTrack, fmt::format("status byte in data at tick {}", tick));
        }
        if (type == 0x90 && d[1] > 0) {
            notes.push_back({tick, Kind::NoteOn, channel, d[0], d[1], order++});
        } else if (type == 0x80 || type == 0x90) {
            notes.push_back({tick, Kind::NoteOff, channel, d[0], 0, order++});
        }
    }
    // Missing end-of-track is tolerated: the chunk length bounds the track.
}

}  // namespace

TempoMap::TempoMap(int ticks_per_quarter, std::vector<TempoEntry> entries) : tpq_(ticks_per_quarter) {
    if (tpq_ <= 0) throw Error(Errc::InvalidArgument, "ticks per quarter must be > 0");
    std::stable_sort(entries.begin(), entries.end(), [](auto& a, auto& b) { return a.tick < b.tick; });
    // Later entries at the same tick win.
    for (const auto& e : entries) {
        if (!entries_.empty() && entries_.back().tick == e.tick)
            entries_.back() = e;
        else
            entries_.push_back(e);
    }
    if (entries_.empty() || entries_.front().tick != 0) entries_.insert(entries_.begin(), {0, kDefaultTempo});

    entry_seconds_.resize(entries_.size());
    entry_seconds_[0] = 0.0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        const auto dt = static_cast<double>(entries_[i].tick - entries_[i - 1].tick);
        entry_seconds_[i] = entry_seconds_[i - 1] + dt * entries_[i - 1].us_per_quarter * 1e-6 / tpq_;
    }
}

double TempoMap::seconds_at(std::int64_t tick) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), tick,
                               [](std::int64_t t, const TempoEntry& e) { return t < e.tick; });
    const auto i = static_cast<std::size_t>(std::distance(entries_.begin(), it)) - 1;
    const auto dt = static_cast<double>(tick - entries_[i].tick);
    return entry_seconds_[i] + dt * entries_[i].us_per_quarter * 1e-6 / tpq_;
}

ParsedMidi parse_smf(std::span<const std::uint8_t> bytes) {
    Reader r(bytes, Errc::MalformedHeader);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), "MThd")) throw Error(Errc::MalformedHeader, "missing MThd");
    const auto hlen = r.u32();
    if (hlen < 6) throw Error(Errc::MalformedHeader, "header chunk shorter than 6 bytes");
    auto header = r.take(hlen);
    const int format = header[0] << 8 | header[1];
    const int ntracks = header[2] << 8 | header[3];
    const int division = header[4] << 8 | header[5];
    if (format > 1) throw Error(Errc::MalformedHeader, fmt::format("unsupported SMF format {}", format));
    if (division & 0x8000) throw Error(Errc::MalformedHeader, "SMPTE time division is not supported");
    if (division == 0) throw Error(Errc::MalformedHeader, "zero ticks per quarter");

    std::vector<RawNote> raw;
    std::vector<TempoEntry> tempos;
    std::size_t order = 0;
    int seen_tracks = 0;
    while (seen_tracks < ntracks) {
        if (r.remaining() < 8) throw Error(Errc::TruncatedTrack, fmt::format("expected {} tracks, found {}", ntracks, seen_tracks));
        auto id = r.take(4);
        const auto len = r.u32();
        if (r.remaining() < len) throw Error(Errc::TruncatedTrack, fmt::format("track {} declares {} bytes, {} left", seen_tracks, len, r.remaining()));
        auto body = r.take(len);
        if (!std::equal(id.begin(), id.end(), "MTrk")) continue;  // alien chunk
        read_track(body, raw, tempos, order);
        ++seen_tracks;
    }

    TempoMap tempo(division, std::move(tempos));

    // Offs before ons at equal ticks, so back-to-back repeats of a pitch pair up.
    std::stable_sort(raw.begin(), raw.end(), [](const RawNote& a, const RawNote& b) {
        if (a.tick != b.tick) return a.tick < b.tick;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.order < b.order;
    });

    std::map<std::pair<int, int>, RawNote> open;
    std::vector<NoteEvent> notes;
    auto close = [&](const RawNote& on, std::int64_t tick) {
        if (tick <= on.tick) return;  // zero-length after merge; drop
        notes.push_back({on.pitch, tempo.seconds_at(on.tick), tempo.seconds_at(tick), on.velocity});
    };
    for (const auto& ev : raw) {
        const auto key = std::make_pair(ev.channel, ev.pitch);
        auto it = open.find(key);
        if (ev.kind == Kind::NoteOn) {
            if (it != open.end()) {
                close(it->second, ev.tick);
                it->second = ev;
            } else {
                open.emplace(key, ev);
            }
        } else if (it != open.end()) {
            close(it->second, ev.tick);
            open.erase(it);
        }
    }
    if (!open.empty()) {
        const auto& on = open.begin()->second;
        throw Error(Errc::UnpairedNoteOn, fmt::format("pitch {} at tick {} (channel {}) never released", on.pitch, on.tick, on.channel));
    }

    auto seq = NoteSequence::from_notes(std::move(notes));
    // Channels are merged; a pitch struck on two channels at one tick counts once.
    std::set<std::pair<int, double>> seen;
    std::erase_if(seq.notes, [&](const NoteEvent& n) { return !seen.emplace(n.pitch, n.onset).second; });
    return {std::move(seq), std::move(tempo)};
}

void append_vlq(std::vector<std::uint8_t>& out, std::uint32_t value) {
    std::array<std::uint8_t, 5> buf{};
    int n = 0;
    buf[n++] = value & 0x7f;
    while (value >>= 7) buf[n++] = static_cast<std::uint8_t>((value & 0x7f) | 0x80);
    while (n > 0) out.push_back(buf[--n]);
}

std::vector<std::uint8_t> write_smf(const NoteSequence& seq, int ticks_per_quarter) {
    if (ticks_per_quarter <= 0 || ticks_per_quarter > 0x7fff) throw Error(Errc::InvalidArgument, "ticks per quarter out of range");
    const double ticks_per_second = ticks_per_quarter * 1e6 / kDefaultTempo;
    auto to_tick = [&](double s) { return static_cast<std::int64_t>(std::llround(s * ticks_per_second)); };

    struct Ev {
        std::int64_t tick;
        int kind;  // 0 off, 1 on
        int pitch;
        int velocity;
    };
    std::vector<Ev> events;
    events.reserve(seq.notes.size() * 2);
    for (const auto& n : seq.notes) {
        const auto on = to_tick(n.onset);
        const auto off = std::max(to_tick(n.offset), on + 1);
        events.push_back({on, 1, n.pitch, n.velocity});
        events.push_back({off, 0, n.pitch, 0});
    }
    std::stable_sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
        if (a.tick != b.tick) return a.tick < b.tick;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.pitch < b.pitch;
    });

    std::vector<std::uint8_t> track;
    // Tempo meta event.
    track.insert(track.end(), {0x00, 0xff, 0x51, 0x03, 0x07, 0xa1, 0x20});
    std::int64_t last = 0;
    bool running = false;
    for (const auto& e : events) {
        append_vlq(track, static_cast<std::uint32_t>(e.tick - last));
        last = e.tick;
        // Note-off is written as note-on with velocity 0 so running status applies.
        if (!running) track.push_back(0x90);
        running = true;
        track.push_back(static_cast<std::uint8_t>(e.pitch));
        track.push_back(static_cast<std::uint8_t>(e.velocity));
    }
    track.insert(track.end(), {0x00, 0xff, 0x2f, 0x00});

    std::vector<std::uint8_t> out{'M', 'T', 'h', 'd', 0, 0, 0, 6, 0, 0, 0, 1};
    out.push_back(static_cast<std::uint8_t>(ticks_per_quarter >> 8));
    out.push_back(static_cast<std::uint8_t>(ticks_per_quarter & 0xff));
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    const auto len = static_cast<std::uint32_t>(track.size());
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(len >> shift));
    out.insert(out.end(), track.begin(), track.end());
    return out;
}

ParsedMidi read_midi_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_smf(bytes);
}

void write_midi_file(const std::filesystem::path& path, const NoteSequence& seq, int ticks_per_quarter) {
    const auto bytes = write_smf(seq, ticks_per_quarter);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace pianoaug::midi
