#pragma once

#include "spf/backend.hpp"
#include "spf/benes.hpp"
#include "spf/binary_io.hpp"
#include "spf/bits.hpp"
#include "spf/bp_tree.hpp"
#include "spf/container.hpp"
#include "spf/fid.hpp"
#include "spf/func.hpp"
#include "spf/func_range.hpp"
#include "spf/generate.hpp"
#include "spf/lehmer.hpp"
#include "spf/level_ancestor.hpp"
#include "spf/permutation.hpp"
#include "spf/powers.hpp"
#include "spf/shortcut.hpp"
#include "spf/stored.hpp"
#include "spf/text_io.hpp"
