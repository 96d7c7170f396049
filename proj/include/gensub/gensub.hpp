#ifndef GENSUB_GENSUB_HPP
#define GENSUB_GENSUB_HPP

#include "gensub/dynamics.hpp"
#include "gensub/embeddings.hpp"
#include "gensub/entanglement.hpp"
#include "gensub/errors.hpp"
#include "gensub/fock.hpp"
#include "gensub/json_io.hpp"
#include "gensub/matrix_core.hpp"
#include "gensub/partitions.hpp"
#include "gensub/random.hpp"
#include "gensub/spin.hpp"

#endif // GENSUB_GENSUB_HPP
