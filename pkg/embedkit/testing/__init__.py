from embedkit.testing.fake import FakeGeometry, FakeScenario

__all__ = ["FakeGeometry", "FakeScenario"]
