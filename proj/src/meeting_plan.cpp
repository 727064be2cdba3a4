#include "multiga/meeting_plan.hpp"

#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

#include "multiga/errors.hpp"

namespace multiga {

namespace {

const std::regex kClockRe(R"(^(\d{1,2}):(\d{2})(AM|PM)$)");
const std::regex kStartRe(R"(^You start at (.+) at (\d{1,2}:\d{2}(?:AM|PM))\.$)");
const std::regex kTravelRe(
    R"(^You travel to (.+) in (\d+) minutes and arrive at (\d{1,2}:\d{2}(?:AM|PM))\.$)");
const std::regex kWaitRe(R"(^You wait until (\d{1,2}:\d{2}(?:AM|PM))\.$)");
const std::regex kMeetRe(
    R"(^You meet (.+) for (\d+) minutes from (\d{1,2}:\d{2}(?:AM|PM)) to (\d{1,2}:\d{2}(?:AM|PM))\.$)");

std::string strip(std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Minutes parse_clock(std::string_view text) {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(text.begin(), text.end(), m, kClockRe))
        throw Error(ErrorKind::parse, "bad clock time '" + std::string(text) +
                                          "' (expected e.g. 9:00AM or 1:45PM)");
    int hour = std::stoi(m[1].str());
    const int minute = std::stoi(m[2].str());
    const bool pm = m[3].str() == "PM";
    if (hour < 1 || hour > 12 || minute > 59)
        throw Error(ErrorKind::parse, "clock time out of range: " + std::string(text));
    if (hour == 12) hour = 0;
    return (pm ? 720 : 0) + hour * 60 + minute;
}

std::string format_clock(Minutes m) {
    if (m < 0 || m >= 1440)
        throw Error(ErrorKind::validation, "minutes-of-day out of range: " + std::to_string(m));
    const int h24 = m / 60;
    const int minute = m % 60;
    const int h12 = h24 % 12 == 0 ? 12 : h24 % 12;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%d:%02d%s", h12, minute, h24 < 12 ? "AM" : "PM");
    return buf;
}

MeetingPlan parse_plan(std::string_view text) {
    MeetingPlan plan;
    std::istringstream lines{std::string(text)};
    std::string raw;
    bool have_start = false;
    while (std::getline(lines, raw)) {
        std::string line = strip(raw);
        if (line.empty()) continue;
        if (line == "SOLUTION:") continue;
        if (line.rfind("SOLUTION:", 0) == 0) {
            line = strip(line.substr(9));
            if (line.empty()) continue;
        }

        std::smatch m;
        if (std::regex_match(line, m, kStartRe)) {
            if (have_start)
                throw Error(ErrorKind::parse, "plan declares a second start: \"" + line + "\"");
            if (!plan.steps.empty())
                throw Error(ErrorKind::parse, "start step must come first: \"" + line + "\"");
            plan.steps.push_back(StartStep{m[1].str(), parse_clock(m[2].str())});
            have_start = true;
        } else if (std::regex_match(line, m, kTravelRe)) {
            plan.steps.push_back(
                TravelStep{m[1].str(), std::stoi(m[2].str()), parse_clock(m[3].str())});
        } else if (std::regex_match(line, m, kWaitRe)) {
            plan.steps.push_back(WaitStep{parse_clock(m[1].str())});
        } else if (std::regex_match(line, m, kMeetRe)) {
            plan.steps.push_back(MeetStep{m[1].str(), std::stoi(m[2].str()),
                                          parse_clock(m[3].str()), parse_clock(m[4].str())});
        } else {
            throw Error(ErrorKind::parse, "line does not match the plan grammar: \"" + line + "\"");
        }
    }
    if (!have_start) throw Error(ErrorKind::parse, "plan has no start step");
    return plan;
}

std::string format_plan(const MeetingPlan& plan) {
    std::ostringstream out;
    for (const auto& step : plan.steps) {
        if (const auto* s = std::get_if<StartStep>(&step)) {
            out << "You start at " << s->location << " at " << format_clock(s->time) << ".\n";
        } else if (const auto* t = std::get_if<TravelStep>(&step)) {
            out << "You travel to " << t->destination << " in " << t->travel_minutes
                << " minutes and arrive at " << format_clock(t->arrive_time) << ".\n";
        } else if (const auto* w = std::get_if<WaitStep>(&step)) {
            out << "You wait until " << format_clock(w->until_time) << ".\n";
        } else {
            const auto& m = std::get<MeetStep>(step);
            out << "You meet " << m.person << " for " << m.duration << " minutes from "
                << format_clock(m.start_time) << " to " << format_clock(m.end_time) << ".\n";
        }
    }
    return out.str();
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::meeting_before_arrival: return "meeting_before_arrival";
        case ViolationKind::outside_window: return "outside_window";
        case ViolationKind::duration_too_short: return "duration_too_short";
        case ViolationKind::duration_mismatch: return "duration_mismatch";
        case ViolationKind::wrong_location: return "wrong_location";
        case ViolationKind::unrealistic_travel: return "unrealistic_travel";
        case ViolationKind::time_regression: return "time_regression";
        case ViolationKind::duplicate_person: return "duplicate_person";
    }
    return "unknown";
}

PlanValidation validate_plan(const MeetingPlan& plan,
                             const std::vector<MeetingConstraint>& constraints,
                             const TravelMatrix& dist) {
    PlanValidation out;
    if (plan.steps.empty() || !std::holds_alternative<StartStep>(plan.steps.front()))
        throw Error(ErrorKind::validation, "plan must open with a start step");

    auto constraint_for = [&](const std::string& person) -> const MeetingConstraint& {
        for (const auto& c : constraints)
            if (c.person == person) return c;
        throw Error(ErrorKind::validation, "unknown person '" + person + "'");
    };
    auto travel_minutes = [&](const std::string& from, const std::string& to) -> Minutes {
        auto row = dist.find(from);
        if (row == dist.end())
            throw Error(ErrorKind::validation, "unknown location '" + from + "'");
        auto cell = row->second.find(to);
        if (cell == row->second.end())
            throw Error(ErrorKind::validation,
                        "no travel entry from '" + from + "' to '" + to + "'");
        return cell->second;
    };
    auto flag = [&](ViolationKind kind, std::size_t index, std::string detail) {
        out.violations.push_back(Violation{kind, index, std::move(detail)});
    };

    const auto& start = std::get<StartStep>(plan.steps.front());
    std::string location = start.location;
    Minutes now = start.time;
    if (!dist.empty()) travel_minutes(location, location);  // start location must be known
    std::set<std::string> met;

    for (std::size_t i = 1; i < plan.steps.size(); ++i) {
        const auto& step = plan.steps[i];
        if (const auto* t = std::get_if<TravelStep>(&step)) {
            const Minutes needed = travel_minutes(location, t->destination);
            if (t->travel_minutes < needed)
                flag(ViolationKind::unrealistic_travel, i,
                     "claims " + std::to_string(t->travel_minutes) + " minutes to " +
                         t->destination + ", matrix requires " + std::to_string(needed));
            if (t->arrive_time < now + t->travel_minutes)
                flag(ViolationKind::time_regression, i,
                     "arrival at " + format_clock(t->arrive_time) +
                         " precedes departure plus travel time");
            now = std::max(t->arrive_time, now + t->travel_minutes);
            location = t->destination;
        } else if (const auto* w = std::get_if<WaitStep>(&step)) {
            if (w->until_time < now)
                flag(ViolationKind::time_regression, i,
                     "waits until " + format_clock(w->until_time) + ", already " +
                         format_clock(now));
            now = std::max(w->until_time, now);
        } else if (const auto* m = std::get_if<MeetStep>(&step)) {
            const MeetingConstraint& c = constraint_for(m->person);
            const std::size_t flags_before = out.violations.size();
            if (m->end_time < m->start_time)
                flag(ViolationKind::time_regression, i, "meeting ends before it starts");
            if (m->start_time < now)
                flag(ViolationKind::meeting_before_arrival, i,
                     "meeting starts at " + format_clock(m->start_time) +
                         " but the plan only gets there at " + format_clock(now));
            if (location != c.location)
                flag(ViolationKind::wrong_location, i,
                     m->person + " must be met at " + c.location + ", plan is at " + location);
            if (m->start_time < c.window_start || m->end_time > c.window_end)
                flag(ViolationKind::outside_window, i,
                     "meeting " + format_clock(m->start_time) + "-" + format_clock(m->end_time) +
                         " outside window " + format_clock(c.window_start) + "-" +
                         format_clock(c.window_end));
            const Minutes actual = m->end_time - m->start_time;
            if (actual != m->duration)
                flag(ViolationKind::duration_mismatch, i,
                     "states " + std::to_string(m->duration) + " minutes but runs " +
                         std::to_string(actual));
            if (actual < c.min_duration)
                flag(ViolationKind::duration_too_short, i,
                     std::to_string(actual) + " minutes < required " +
                         std::to_string(c.min_duration));
            if (met.count(m->person))
                flag(ViolationKind::duplicate_person, i, m->person + " already met");
            met.insert(m->person);
            if (out.violations.size() == flags_before) ++out.valid_meetings;
            now = std::max(now, m->end_time);
        } else {
            throw Error(ErrorKind::validation, "start step repeated mid-plan");
        }
    }
    return out;
}

}  // namespace multiga
