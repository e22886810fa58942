from apps.metric.distances import canonical, completed_graph, d_T, d_T2, modulus

__all__ = ["canonical", "completed_graph", "d_T", "d_T2", "modulus"]
