#pragma once

#include "verdalca/workflows.hpp"

namespace testing {

/// The shipped data directory, loaded once per test binary.
inline const verdalca::Workspace& bundled() {
    static const verdalca::Workspace ws =
        verdalca::Workspace::open(std::filesystem::path(VERDALCA_DEFAULT_DATA_DIR) / "database.json");
    return ws;
}

}  // namespace testing
