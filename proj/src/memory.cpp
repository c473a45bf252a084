#include "echo/memory.hpp"

#include <fmt/format.h>

#include "echo/backend.hpp"
#include "echo/errors.hpp"
#include "echo/prompt.hpp"

namespace echo {
namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Reply budget in tokens for a summary of `budget` characters.
std::size_t summary_tokens(std::size_t budget) { return budget / 3 + 16; }

}  // namespace

std::string truncate_front(std::string_view text, std::size_t budget) {
  if (text.size() <= budget) return std::string(text);
  std::size_t end = budget;
  while (end > 0 && is_continuation(static_cast<unsigned char>(text[end]))) --end;
  return std::string(text.substr(0, end));
}

std::string truncate_back(std::string_view text, std::size_t budget) {
  if (text.size() <= budget) return std::string(text);
  std::size_t start = text.size() - budget;
  while (start < text.size() && is_continuation(static_cast<unsigned char>(text[start]))) ++start;
  return std::string(text.substr(start));
}

std::string render_exposure(const ExposureItem& item) {
  std::string text = item.text;
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return fmt::format("Agent {} (belief {}): {}", item.source, item.belief, text);
}

CompressionResult compress_long_term(TextBackend& backend, const std::string& old_summary,
                                     std::span<const ExposureItem> day_items, std::size_t budget) {
  CompressionResult out;
  if (day_items.empty()) {
    out.summary = truncate_front(old_summary, budget);
    return out;
  }
  try {
    const std::string prompt = build_compression_prompt(old_summary, day_items, budget);
    out.summary = truncate_front(backend.complete(prompt, summary_tokens(budget), 0.0), budget);
  } catch (const TransportError& e) {
    std::string joined = old_summary;
    for (const auto& item : day_items) {
      if (!joined.empty()) joined += ' ';
      joined += render_exposure(item);
    }
    out.summary = truncate_back(joined, budget);
    out.error = e.what();
  }
  return out;
}

}  // namespace echo
