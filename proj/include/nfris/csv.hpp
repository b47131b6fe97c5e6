// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_CSV_HPP
#define NFRIS_CSV_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace nfris
{
    inline constexpr const char *version_string = "0.1.0";

    std::uint64_t fnv1a64(std::string_view data);

    // Run-manifest comment prepended to every CSV.
    std::string manifest_line(std::uint64_t config_hash, std::uint64_t seed);

    // Write to a temporary sibling file, then rename into place.
    void write_text_atomic(const std::string &path, const std::string &content);

    // Locale-independent shortest round-trip formatting.
    std::string format_double(double value);
}

#endif
