#pragma once

// Shared test fixtures: the function sequences driving the k = 2 and k = 3
// pipelines, used by unit tests, JSON configs and the acceptance suite.

#include <vector>

#include "mwl/morse.hpp"
#include "mwl/periodic.hpp"

namespace mwl::fixtures {

// k = 2 cosine triple: f_0 = 0, f_1 = cos θ, f_2 = cos(θ - 2).
inline std::vector<TrigPoly> cosine_triple() {
    return {TrigPoly::zero(), TrigPoly::harmonic(1, 1.0),
            TrigPoly::harmonic(1, 1.0, 2.0)};
}

// Generic 4-function sequence for k = 3, chosen so that the degree tuple
// (0,1,0) -> 0 admits exactly one rigid tree (in the internal-02 topology)
// while the internal-13 topology stays empty with a large length margin.
inline std::vector<TrigPoly> quadruple() {
    TrigPoly f1({0.0, 1.0, -0.19549025671118597},
                {0.0, 0.0, 0.07884993338235205});
    TrigPoly f2({0.0, 0.3024713832518526, 0.15506868173108102},
                {0.0, -0.8294183234071875, -0.1332542736079831});
    TrigPoly f3({0.0, -0.12511350795450368, 0.06340265281495498},
                {0.0, 1.2323527676075465, -0.10674444380053537});
    return {TrigPoly::zero(), f1, f2, f3};
}

// Critical tuple for the quadruple: indices (0,1,0) -> 0, all rank 0.
inline std::vector<CriticalPoint> quadruple_q_in(const MorseSequence& seq) {
    return {seq.critical_by_rank(0, 1, 0, 0), seq.critical_by_rank(1, 2, 1, 0),
            seq.critical_by_rank(2, 3, 0, 0)};
}
inline CriticalPoint quadruple_q_out(const MorseSequence& seq) {
    return seq.critical_by_rank(0, 3, 0, 0);
}

}  // namespace mwl::fixtures
