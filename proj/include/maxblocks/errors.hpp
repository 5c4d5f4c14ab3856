#pragma once

#include <stdexcept>
#include <string>

namespace maxblocks {

// Problems with user-supplied data (files, flags, ill-formed models or
// atlases, out-of-domain arguments).  The CLI reports these and exits 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violations of internal mathematical invariants: a differential that does
// not square to zero, a morphism that does not commute, a duality slot that
// disagrees with its mirror.  These indicate inconsistent input *data* (as
// opposed to malformed input) or a bug; the CLI exits 2.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace maxblocks
