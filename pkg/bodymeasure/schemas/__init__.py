from bodymeasure.schemas.body import AUX_GIRTHS, RANGE_PARAMS, REQUIRED_JOINTS, BodySpec, GenerationRanges, Sex, Skeleton
from bodymeasure.schemas.measurement import AUXILIARY_KEYS, CANONICAL_KEYS, MEASUREMENT_KEYS, REPORT_LABELS, REPORTED_KEYS, MeasureConfig, MeasurementSet
from bodymeasure.schemas.render import RenderConfig, ShadingMode
from bodymeasure.schemas.dataset import DatasetManifest, SampleRecord, Split
from bodymeasure.schemas.training import BackboneConfig, BackboneName, EpochRecord, EvalReport, HeadConfig, ModelCard, SubsetMae, TrainConfig, TrainHistory
from bodymeasure.schemas.screening import FlagStatus, ProportionResult, ScreeningReport, ScreeningThresholds, WaistClass, WhrClass
from bodymeasure.schemas.pipeline import PipelineConfig
