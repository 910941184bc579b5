#include <rdlb/technique.hpp>

#include <algorithm>
#include <cctype>

namespace rdlb {

std::string_view to_string(Technique t) {
    switch (t) {
    case Technique::Static: return "STATIC";
    case Technique::SS: return "SS";
    case Technique::FSC: return "FSC";
    case Technique::mFSC: return "mFSC";
    case Technique::GSS: return "GSS";
    case Technique::TSS: return "TSS";
    case Technique::FAC: return "FAC";
    case Technique::WF: return "WF";
    case Technique::RAND: return "RAND";
    case Technique::AWF_B: return "AWF-B";
    case Technique::AWF_C: return "AWF-C";
    case Technique::AWF_D: return "AWF-D";
    case Technique::AWF_E: return "AWF-E";
    case Technique::AF: return "AF";
    }
    return "?";
}

namespace {

std::string normalize(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '-' || c == '_') continue;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

std::optional<Technique> parse_technique(std::string_view name) {
    const auto key = normalize(name);
    for (Technique t : kAllTechniques) {
        if (normalize(to_string(t)) == key) return t;
    }
    return std::nullopt;
}

bool is_adaptive(Technique t) {
    switch (t) {
    case Technique::AWF_B:
    case Technique::AWF_C:
    case Technique::AWF_D:
    case Technique::AWF_E:
    case Technique::AF:
        return true;
    default:
        return false;
    }
}

bool is_batched(Technique t) {
    switch (t) {
    case Technique::FAC:
    case Technique::WF:
    case Technique::AWF_B:
    case Technique::AWF_C:
    case Technique::AWF_D:
    case Technique::AWF_E:
        return true;
    default:
        return false;
    }
}

}  // namespace rdlb
