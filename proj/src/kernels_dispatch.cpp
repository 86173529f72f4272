#include <cstdlib>
#include <cstring>

#include "phasecs/kernels.hpp"

namespace phasecs::kernels {

const Ops& active() {
  static const Ops* selected = [] {
    const Ops* best = avx2_ops();
    if (const char* env = std::getenv("PHASECS_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
      if (std::strcmp(env, "avx2") == 0 && best) return best;
      // unknown or unsupported request: fall through to auto selection
    }
    return best ? best : &scalar_ops();
  }();
  return *selected;
}

}  // namespace phasecs::kernels
