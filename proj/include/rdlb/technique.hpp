#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rdlb {

/// Loop scheduling techniques supported by the scheduler.
enum class Technique : std::uint8_t {
    Static,
    SS,
    FSC,
    mFSC,
    GSS,
    TSS,
    FAC,
    WF,
    RAND,
    AWF_B,
    AWF_C,
    AWF_D,
    AWF_E,
    AF,
};

inline constexpr std::array<Technique, 14> kAllTechniques = {
    Technique::Static, Technique::SS,    Technique::FSC,   Technique::mFSC,
    Technique::GSS,    Technique::TSS,   Technique::FAC,   Technique::WF,
    Technique::RAND,   Technique::AWF_B, Technique::AWF_C, Technique::AWF_D,
    Technique::AWF_E,  Technique::AF,
};

/// Every technique that assigns work at runtime (all but STATIC).
inline constexpr std::array<Technique, 13> kDynamicTechniques = {
    Technique::SS,    Technique::FSC,   Technique::mFSC,  Technique::GSS,
    Technique::TSS,   Technique::FAC,   Technique::WF,    Technique::RAND,
    Technique::AWF_B, Technique::AWF_C, Technique::AWF_D, Technique::AWF_E,
    Technique::AF,
};

std::string_view to_string(Technique t);

/// Case-insensitive; accepts "AWF-B" and "AWF_B" spellings.
std::optional<Technique> parse_technique(std::string_view name);

bool is_adaptive(Technique t);

/// FAC, WF and the AWF variants share the batch structure.
bool is_batched(Technique t);

}  // namespace rdlb
