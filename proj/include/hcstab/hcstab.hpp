#pragma once

#include <hcstab/rational.hpp>
#include <hcstab/corpus.hpp>
#include <hcstab/windows.hpp>
#include <hcstab/selection.hpp>
#include <hcstab/stability.hpp>
#include <hcstab/synth.hpp>
#include <hcstab/report.hpp>
