from .dichotomy_classifier import ClassificationParams, DichotomyClassifier, Report, ThresholdScan, classify
