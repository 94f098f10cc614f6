#pragma once

#include "rotwave/field.hpp"
#include "rotwave/pde_freeze.hpp"

#include <json.hpp>

#include <string>

namespace rotwave {

/// CSV with one "# config_hash=... version=..." header line followed by
/// "x,y,u1,..." rows in fixed node order (deterministic bytes).
void write_field_csv(const std::string& path, const Field& field, const std::string& hash);

/// Reads a field written by write_field_csv; grid inferred from the rows.
Field read_field_csv(const std::string& path);

/// JSON with an embedded meta block carrying the hash and version.
void write_json(const std::string& path, nlohmann::json payload, const std::string& hash);

nlohmann::json read_json(const std::string& path);

nlohmann::json frame_to_json(const FreezeState& state, const Frame& frame);

/// Simple lock file guarding an output directory; throws when already held.
class DirLock {
  public:
    explicit DirLock(const std::string& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    std::string path_;
};

}  // namespace rotwave
