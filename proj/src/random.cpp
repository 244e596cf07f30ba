#include "coopdstc/random.hpp"

#include <array>

namespace coopdstc {

Rng derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    std::array<std::uint32_t, 8> words{};
    const std::array<std::uint64_t, 4> keys{seed, a, b, c};
    for (std::size_t i = 0; i < keys.size(); ++i) {
        words[2 * i] = static_cast<std::uint32_t>(keys[i]);
        words[2 * i + 1] = static_cast<std::uint32_t>(keys[i] >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

const char* to_string(DetectorKind kind)
{
    return kind == DetectorKind::Rake ? "rake" : "mmse";
}

} // namespace coopdstc
