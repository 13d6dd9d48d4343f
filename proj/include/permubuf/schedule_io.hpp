#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "permubuf/errors.hpp"
#include "permubuf/schedule.hpp"

namespace permubuf {

// Text schedule format: a `m=<int>` header, then one `<time> <buffer>` line
// per event (0-based buffers); `#` starts a comment. A JSON mirror with
// fields `m` and `events: [[time, buffer], ...]` is accepted interchangeably.

inline std::string to_text(const ArrivalSchedule& schedule) {
    std::ostringstream out;
    out << "m=" << schedule.m << "\n";
    for (const Event& e : schedule.events)
        out << e.time << " " << e.buffer << "\n";
    return out.str();
}

inline nlohmann::ordered_json to_json(const ArrivalSchedule& schedule) {
    nlohmann::ordered_json j;
    j["m"] = schedule.m;
    auto& events = j["events"] = nlohmann::ordered_json::array();
    for (const Event& e : schedule.events)
        events.push_back({e.time, e.buffer});
    return j;
}

inline ArrivalSchedule schedule_from_json(const nlohmann::json& j) {
    try {
        const int m = j.at("m").get<int>();
        std::vector<Event> events;
        for (const auto& pair : j.at("events")) {
            if (!pair.is_array() || pair.size() != 2)
                throw parse_error("schedule JSON events must be [time, buffer] pairs");
            events.push_back({pair[0].get<int>(), pair[1].get<int>()});
        }
        return make_schedule(m, std::move(events));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed schedule JSON: ") + e.what());
    }
}

namespace detail {

inline int parse_int_token(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw parse_error(where + ": expected an integer, got '" + token + "'");
    }
}

} // namespace detail

inline ArrivalSchedule parse_schedule_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int m = -1;
    std::vector<Event> events;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) continue; // blank or comment-only line
        const std::string where = "line " + std::to_string(lineno);
        if (m < 0) {
            if (first.rfind("m=", 0) != 0)
                throw parse_error(where + ": expected header m=<int> before events");
            m = detail::parse_int_token(first.substr(2), where);
            std::string extra;
            if (fields >> extra)
                throw parse_error(where + ": trailing tokens after header");
            continue;
        }
        std::string second, extra;
        if (!(fields >> second) || (fields >> extra))
            throw parse_error(where + ": expected '<time> <buffer>', got '" + line + "'");
        events.push_back({detail::parse_int_token(first, where),
                          detail::parse_int_token(second, where)});
    }
    if (m < 0)
        throw parse_error("schedule file has no m=<int> header");
    try {
        return make_schedule(m, std::move(events));
    } catch (const invalid_parameter_error& e) {
        throw parse_error(e.what());
    }
}

inline ArrivalSchedule parse_schedule(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("malformed schedule JSON: ") + e.what());
        }
        return schedule_from_json(j);
    }
    return parse_schedule_text(text);
}

inline ArrivalSchedule load_schedule(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open schedule file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schedule(buf.str());
}

inline void save_schedule(const ArrivalSchedule& schedule, const std::string& path,
                          bool as_json = false) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw parse_error("cannot write schedule file: " + path);
    if (as_json)
        out << to_json(schedule).dump(2) << "\n";
    else
        out << to_text(schedule);
}

} // namespace permubuf
