#pragma once

#include <atomic>
#include <cstddef>
#include <string>
#include <string_view>

namespace echo {

// Source of model completions. Implementations must be safe to call from
// several threads at once and throw TransportError on failure.
class TextBackend {
 public:
  virtual ~TextBackend() = default;

  // max_length is a token budget for the reply.
  virtual std::string complete(const std::string& prompt, std::size_t max_length,
                               double temperature) = 0;
  virtual std::string identity() const = 0;
};

// Deterministic stand-in for a language model. Reflection prompts are
// answered by mock_reflection_rule, summary prompts by mock_summary_rule.
class MockBackend final : public TextBackend {
 public:
  std::string complete(const std::string& prompt, std::size_t max_length,
                       double temperature) override;
  std::string identity() const override { return "mock"; }
};

// Reads own belief and exposed beliefs from a reflection prompt and answers
// with round(0.7 * own + 0.3 * mean(exposed)); with a nudge block and an
// extreme own belief the answer moves one step toward 0.
std::string mock_reflection_rule(std::string_view prompt);

// Digest of the last three new items, cut to the prompt's budget.
std::string mock_summary_rule(std::string_view prompt);

inline constexpr std::size_t kMockSummaryItems = 3;

// Wraps another backend and counts calls.
class CountingBackend final : public TextBackend {
 public:
  explicit CountingBackend(TextBackend& inner) : inner_(inner) {}

  std::string complete(const std::string& prompt, std::size_t max_length,
                       double temperature) override {
    ++calls_;
    return inner_.complete(prompt, max_length, temperature);
  }
  std::string identity() const override { return inner_.identity(); }

  std::size_t calls() const { return calls_.load(); }
  void reset() { calls_ = 0; }

 private:
  TextBackend& inner_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace echo
