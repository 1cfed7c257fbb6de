#include "mdbl/floor_log2.hpp"

namespace mdbl {

int floor_log2(uint64_t u, Log2Backend backend) {
    if (u == 0) throw DomainError("floor_log2: argument must be nonzero");
    return backend == Log2Backend::table ? floor_log2_table_unchecked(u)
                                         : floor_log2_clz_unchecked(u);
}

}  // namespace mdbl
