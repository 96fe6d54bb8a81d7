#pragma once

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/histogram.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/core/image_io.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/detection/average_precision.hpp"
#include "fusionbench/detection/box.hpp"
#include "fusionbench/detection/detections_json.hpp"
#include "fusionbench/detection/yolo.hpp"
#include "fusionbench/metrics/evaluate.hpp"
#include "fusionbench/metrics/mutual_information.hpp"
#include "fusionbench/metrics/psnr.hpp"
#include "fusionbench/metrics/qabf.hpp"
#include "fusionbench/metrics/ssim.hpp"
#include "fusionbench/metrics/statistics.hpp"
#include "fusionbench/metrics/types.hpp"
#include "fusionbench/registration.hpp"
#include "fusionbench/reporting/render.hpp"
#include "fusionbench/reporting/report.hpp"
#include "fusionbench/reporting/results_store.hpp"
#include "fusionbench/speed/subprocess.hpp"
#include "fusionbench/speed/timing.hpp"
