#pragma once

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace dlindblad {

// Shared stderr logger. Verbosity comes from DLINDBLAD_LOG
// (trace|debug|info|warn|error|off), default "warn".
inline std::shared_ptr<spdlog::logger> logger() {
    static std::once_flag once;
    static std::shared_ptr<spdlog::logger> instance;
    std::call_once(once, [] {
        instance = spdlog::get("dlindblad");
        if (!instance) {
            instance = spdlog::stderr_color_mt("dlindblad");
        }
        instance->set_pattern("[%l] %v");
        spdlog::level::level_enum level = spdlog::level::warn;
        if (const char* env = std::getenv("DLINDBLAD_LOG")) {
            level = spdlog::level::from_str(env);
        }
        instance->set_level(level);
    });
    return instance;
}

}  // namespace dlindblad
