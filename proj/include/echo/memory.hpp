#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace echo {

class TextBackend;

// One opinion an agent read today, with the speaker's stated belief.
struct ExposureItem {
  std::size_t source = 0;
  int belief = 0;
  std::string text;

  friend bool operator==(const ExposureItem&, const ExposureItem&) = default;
};

inline constexpr std::size_t kDefaultMemoryBudget = 600;

struct MemoryStore {
  std::vector<ExposureItem> short_term;  // emptied once the day is compressed
  std::string long_term;                 // running summary, <= budget bytes

  friend bool operator==(const MemoryStore&, const MemoryStore&) = default;
};

// Longest prefix / suffix of text that fits in `budget` bytes without
// splitting a UTF-8 sequence.
std::string truncate_front(std::string_view text, std::size_t budget);
std::string truncate_back(std::string_view text, std::size_t budget);

// "Agent 3 (belief 1): text" with newlines in text folded to spaces.
std::string render_exposure(const ExposureItem& item);

struct CompressionResult {
  std::string summary;
  std::optional<std::string> error;  // backend failure that forced the fallback
};

// Folds today's items into the long-term summary through the backend. The
// result never exceeds budget: over-long replies are cut, and a backend
// failure falls back to the newest `budget` bytes of old summary + items.
CompressionResult compress_long_term(TextBackend& backend, const std::string& old_summary,
                                     std::span<const ExposureItem> day_items, std::size_t budget);

}  // namespace echo
