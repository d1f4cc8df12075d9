#pragma once

#include <array>
#include <cstdint>
#include <string_view>

// Reference values of the encoded text at decade lengths, used by the report
// command to compare a fresh run against known results. The 1e8 and 1e9 rows
// were established on long runs and are only checked when such a corpus is
// supplied.

namespace natext::reference {

struct DictionaryRow {
  std::uint64_t n;
  std::uint64_t distinct;
};

inline constexpr std::array<DictionaryRow, 9> kDictionarySizes{{
    {10ull, 3},
    {100ull, 12},
    {1000ull, 29},
    {10000ull, 63},
    {100000ull, 123},
    {1000000ull, 230},
    {10000000ull, 412},
    {100000000ull, 708},
    {1000000000ull, 1195},
}};

struct TopWordsRow {
  std::uint64_t n;
  std::array<std::string_view, 5> words;  // empty entries where fewer ranks exist
};

inline constexpr std::array<TopWordsRow, 7> kTopWords{{
    {10ull, {"10", "1100", "1010", "", ""}},
    {100ull, {"1010", "10", "110010", "1100", "101100"}},
    {1000ull, {"1010", "10", "110010", "101010", "11001010"}},
    {10000ull, {"1010", "101010", "10", "110010", "11001010"}},
    {100000ull, {"1010", "101010", "11001010", "10", "110010"}},
    {1000000ull, {"1010", "101010", "11001010", "10101010", "10"}},
    {10000000ull, {"101010", "1010", "10101010", "11001010", "10"}},
}};

// The ten walk words the report analyzes: the bush family of square-free
// numbers and five words of non-square-free numbers.
inline constexpr std::array<std::string_view, 5> kSquareFreeWords{
    "10", "1010", "101010", "10101010", "1010101010"};
inline constexpr std::array<std::string_view, 5> kNonSquareFreeWords{
    "1100", "110010", "11001010", "1100101010", "110010101010"};

}  // namespace natext::reference
