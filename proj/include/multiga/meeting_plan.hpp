#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace multiga {

/// Times are minutes since midnight.
using Minutes = int;

/// Parses "9:00AM" / "1:45PM" (strict H:MM + AM/PM). Throws Error{parse}.
Minutes parse_clock(std::string_view text);
std::string format_clock(Minutes m);

struct StartStep {
    std::string location;
    Minutes time = 0;
    bool operator==(const StartStep&) const = default;
};
struct TravelStep {
    std::string destination;
    Minutes travel_minutes = 0;
    Minutes arrive_time = 0;
    bool operator==(const TravelStep&) const = default;
};
struct WaitStep {
    Minutes until_time = 0;
    bool operator==(const WaitStep&) const = default;
};
struct MeetStep {
    std::string person;
    Minutes duration = 0;
    Minutes start_time = 0;
    Minutes end_time = 0;
    bool operator==(const MeetStep&) const = default;
};

using PlanStep = std::variant<StartStep, TravelStep, WaitStep, MeetStep>;

struct MeetingPlan {
    std::vector<PlanStep> steps;
    bool operator==(const MeetingPlan&) const = default;
};

/// Strict line grammar:
///   "You start at L at T."
///   "You travel to D in X minutes and arrive at T."
///   "You wait until T."
///   "You meet P for Y minutes from S to E."
/// A leading "SOLUTION:" marker line is skipped; blank lines are ignored;
/// any other non-empty line is a parse error citing the line. Exactly one
/// Start is required and it must come first.
MeetingPlan parse_plan(std::string_view text);

/// Inverse of parse_plan: emits the exact line grammar, so
/// parse_plan(format_plan(p)) == p for every well-formed plan.
std::string format_plan(const MeetingPlan& plan);

struct MeetingConstraint {
    std::string person;
    std::string location;
    Minutes window_start = 0;
    Minutes window_end = 0;
    Minutes min_duration = 0;
};

/// Travel minutes between named locations, dist[from][to].
using TravelMatrix = std::map<std::string, std::map<std::string, Minutes>>;

enum class ViolationKind {
    meeting_before_arrival,  // starts before the plan could be there
    outside_window,
    duration_too_short,
    duration_mismatch,  // stated minutes disagree with start/end
    wrong_location,
    unrealistic_travel,  // faster than the matrix allows
    time_regression,
    duplicate_person,
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::size_t step_index;
    std::string detail;
};

struct PlanValidation {
    int valid_meetings = 0;
    std::vector<Violation> violations;

    bool has(ViolationKind kind) const {
        for (const auto& v : violations)
            if (v.kind == kind) return true;
        return false;
    }
};

/// Simulates the plan's timeline against the constraints and travel matrix.
/// A meeting counts toward valid_meetings only when it raises no flag.
/// Referencing an unknown person or location is a validation error (thrown),
/// distinct from a violation. Pure: identical inputs give identical output
/// regardless of constraint listing order.
PlanValidation validate_plan(const MeetingPlan& plan,
                             const std::vector<MeetingConstraint>& constraints,
                             const TravelMatrix& dist);

}  // namespace multiga
