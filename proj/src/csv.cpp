// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#include "nfris/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nfris
{
    std::uint64_t fnv1a64(std::string_view data)
    {
        std::uint64_t hash = 14695981039346656037ULL;
        for (unsigned char c : data)
        {
            hash ^= c;
            hash *= 1099511628211ULL;
        }
        return hash;
    }

    std::string manifest_line(std::uint64_t config_hash, std::uint64_t seed)
    {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "# nfris v%s config_hash=%016llx seed=%llu\n",
                      version_string, static_cast<unsigned long long>(config_hash),
                      static_cast<unsigned long long>(seed));
        return buf;
    }

    void write_text_atomic(const std::string &path, const std::string &content)
    {
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open for writing: " + tmp);
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            if (!out)
                throw std::runtime_error("write failed: " + tmp);
        }
        if (std::rename(tmp.c_str(), path.c_str()) != 0)
            throw std::runtime_error("rename failed: " + path);
    }

    std::string format_double(double value)
    {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        if (ec != std::errc())
            throw std::runtime_error("format_double failed");
        return std::string(buf, ptr);
    }
}
