// Copyright 2026 The eavesim developers.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Line-delimited transcript format and the detection-report JSON object.
 *
 * A transcript file is one JSON object per line: a header carrying the run
 * configuration, the message bit and the attack strength, followed by one
 * self-describing record per shot with fields (index, prepared, basis,
 * kind, value) plus Alice's retained outcome m and, when present, Eve's
 * outcome index. Value vocabularies: prepared in {"rho0","rho1","rho+",
 * "rho-"}, basis in {"s1","s3"}, kind in {"bit","result"}.
 */

#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eavesim/detection.hpp"
#include "eavesim/protocol.hpp"

namespace eavesim::io {

inline constexpr int kTranscriptVersion = 1;
inline constexpr const char *kTranscriptFormat = "eavesim.transcript";
inline constexpr const char *kReportFormat = "eavesim.report";

// Parse failure with the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string &message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

using ordered_json = nlohmann::ordered_json;

inline void write_transcript(std::ostream &os,
                             const protocol::Transcript &t) {
    ordered_json header;
    header["format"] = kTranscriptFormat;
    header["version"] = kTranscriptVersion;
    header["n_shots"] = t.config.n_shots;
    header["p_announce"] = t.config.p_announce;
    header["apparatus"] = {{"d1", t.config.apparatus.d1},
                           {"d3", t.config.apparatus.d3},
                           {"d_plus0", t.config.apparatus.d_plus0},
                           {"d_0plus", t.config.apparatus.d_0plus}};
    header["seed"] = t.config.seed;
    header["message_bit"] = t.message_bit;
    if (t.attack_strength)
        header["attack_d"] = *t.attack_strength;
    else
        header["attack_d"] = nullptr;
    os << header.dump() << '\n';
    for (const auto &shot : t.shots) {
        ordered_json rec;
        rec["index"] = shot.index;
        rec["prepared"] = to_string(shot.prepared);
        rec["basis"] = to_string(shot.announcement.basis);
        rec["kind"] = shot.announcement.kind ==
                              protocol::AnnouncementKind::Bit
                          ? "bit"
                          : "result";
        rec["value"] = shot.announcement.value;
        rec["m"] = shot.alice_m;
        if (shot.eve_outcome)
            rec["eve"] = *shot.eve_outcome;
        os << rec.dump() << '\n';
    }
}

namespace detail {

template <typename T>
T require_field(const ordered_json &obj, const char *key, int line) {
    if (!obj.contains(key)) {
        if (std::string(key) == "prepared")
            throw ParseError(line,
                             "shot record lacks the 'prepared' field; "
                             "detection requires Bob's preparation records");
        throw ParseError(line, std::string("missing field '") + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ParseError(line, std::string("field '") + key +
                                   "' has the wrong type");
    }
}

} // namespace detail

inline protocol::Transcript parse_transcript(std::istream &is) {
    std::string line;
    int line_no = 0;
    if (!std::getline(is, line))
        throw ParseError(1, "empty transcript: missing header");
    ++line_no;
    ordered_json header;
    try {
        header = ordered_json::parse(line);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (detail::require_field<std::string>(header, "format", line_no) !=
        kTranscriptFormat)
        throw ParseError(line_no, "not a transcript header");
    if (detail::require_field<int>(header, "version", line_no) !=
        kTranscriptVersion)
        throw ParseError(line_no, "unsupported transcript version");

    protocol::Transcript t;
    t.config.n_shots =
        detail::require_field<std::int64_t>(header, "n_shots", line_no);
    t.config.p_announce =
        detail::require_field<double>(header, "p_announce", line_no);
    const auto apparatus =
        detail::require_field<ordered_json>(header, "apparatus", line_no);
    t.config.apparatus.d1 =
        detail::require_field<double>(apparatus, "d1", line_no);
    t.config.apparatus.d3 =
        detail::require_field<double>(apparatus, "d3", line_no);
    t.config.apparatus.d_plus0 =
        detail::require_field<double>(apparatus, "d_plus0", line_no);
    t.config.apparatus.d_0plus =
        detail::require_field<double>(apparatus, "d_0plus", line_no);
    t.config.seed =
        detail::require_field<std::uint64_t>(header, "seed", line_no);
    t.message_bit = detail::require_field<int>(header, "message_bit", line_no);
    if (t.message_bit != 0 && t.message_bit != 1)
        throw ParseError(line_no, "message_bit must be 0 or 1");
    if (header.contains("attack_d") && !header.at("attack_d").is_null()) {
        t.attack_strength =
            detail::require_field<double>(header, "attack_d", line_no);
        if (!(*t.attack_strength >= 0.0 && *t.attack_strength <= 0.5))
            throw ParseError(line_no, "attack_d must lie in [0, 1/2]");
    }
    try {
        t.config.validate();
    } catch (const std::exception &e) {
        throw ParseError(line_no, std::string("invalid header: ") + e.what());
    }

    t.shots.reserve(static_cast<std::size_t>(
        std::min<std::int64_t>(t.config.n_shots, 1 << 20)));
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        ordered_json rec;
        try {
            rec = ordered_json::parse(line);
        } catch (const nlohmann::json::exception &e) {
            throw ParseError(line_no,
                             std::string("malformed JSON: ") + e.what());
        }
        protocol::ShotRecord shot;
        shot.index = detail::require_field<std::int64_t>(rec, "index", line_no);
        if (shot.index != static_cast<std::int64_t>(t.shots.size()))
            throw ParseError(line_no, "shot index out of order");
        try {
            shot.prepared = prepared_from_string(
                detail::require_field<std::string>(rec, "prepared", line_no));
            const Basis basis = basis_from_string(
                detail::require_field<std::string>(rec, "basis", line_no));
            const auto kind =
                detail::require_field<std::string>(rec, "kind", line_no);
            const int value = detail::require_field<int>(rec, "value", line_no);
            if (kind == "bit")
                shot.announcement = protocol::Announcement::bit(basis, value);
            else if (kind == "result")
                shot.announcement =
                    protocol::Announcement::result(basis, value);
            else
                throw std::invalid_argument("unknown announcement kind: " +
                                            kind);
        } catch (const ParseError &) {
            throw;
        } catch (const std::exception &e) {
            throw ParseError(line_no, e.what());
        }
        shot.alice_m = detail::require_field<int>(rec, "m", line_no);
        if (shot.alice_m != +1 && shot.alice_m != -1)
            throw ParseError(line_no, "field 'm' must be +1 or -1");
        if (shot.announcement.kind == protocol::AnnouncementKind::Result &&
            shot.announcement.value != shot.alice_m)
            throw ParseError(line_no,
                             "result announcement disagrees with outcome m");
        if (rec.contains("eve") && !rec.at("eve").is_null()) {
            const int eve = detail::require_field<int>(rec, "eve", line_no);
            if (eve < 1 || eve > 4)
                throw ParseError(line_no, "field 'eve' must be in 1..4");
            shot.eve_outcome = eve;
        }
        t.shots.push_back(shot);
    }
    if (static_cast<std::int64_t>(t.shots.size()) != t.config.n_shots)
        throw ParseError(line_no + 1,
                         "transcript truncated: header promises " +
                             std::to_string(t.config.n_shots) +
                             " shots, found " +
                             std::to_string(t.shots.size()));
    return t;
}

// Fixed 12-significant-digit numeric rendering for report and curve output.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string render_report_json(const detection::DetectionReport &r) {
    std::string out = "{";
    out += "\"format\":\"" + std::string(kReportFormat) + "\",";
    out += "\"version\":1,";
    out += "\"r\":" + std::to_string(r.r) + ",";
    out += "\"n\":" + std::to_string(r.n) + ",";
    out += "\"k\":" + std::to_string(r.k) + ",";
    out += "\"d_mean\":" + format_number(r.d_mean) + ",";
    out += "\"d_bound_2sigma\":" +
           (r.d_bound_2sigma ? format_number(*r.d_bound_2sigma)
                             : std::string("null")) +
           ",";
    out += "\"info_ceiling_bits\":" +
           (r.info_ceiling_bits ? format_number(*r.info_ceiling_bits)
                                : std::string("null")) +
           ",";
    out += "\"d_hat_95\":" + format_number(r.d_hat_95) + ",";
    out += "\"info_ceiling_bayes_bits\":" +
           format_number(r.info_ceiling_bayes_bits) + ",";
    out += "\"prior\":\"" + r.prior + "\",";
    out += "\"grid_step\":" + format_number(r.grid_step);
    out += "}";
    return out;
}

} // namespace eavesim::io
