#include "gazeaudit/types.hpp"

#include <cmath>
#include <sstream>

namespace gazeaudit {

const char* task_name(Task t) {
    switch (t) {
        case Task::HSS: return "HSS";
        case Task::RAN: return "RAN";
        case Task::TEX: return "TEX";
    }
    return "?";
}

Task task_from_name(const std::string& name) {
    if (name == "HSS") return Task::HSS;
    if (name == "RAN") return Task::RAN;
    if (name == "TEX") return Task::TEX;
    throw SchemaError("unknown task '" + name + "' (expected HSS, RAN or TEX)");
}

std::string WindowKey::to_string() const {
    std::ostringstream os;
    os << subject_id << "_s" << session << "_r" << round << "_" << task_name(task)
       << "_w" << window_index;
    return os.str();
}

bool Seq2::all_finite() const {
    for (double x : h)
        if (!std::isfinite(x)) return false;
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

const char* rating_name(int idx) {
    switch (idx) {
        case 0: return "OverDiff";
        case 1: return "Mentally";
        case 2: return "TiredEyes";
    }
    return "?";
}

int rating_value(const SubjectiveReport& r, int idx) {
    switch (idx) {
        case 0: return r.over_diff;
        case 1: return r.mentally;
        default: return r.tired_eyes;
    }
}

}  // namespace gazeaudit
