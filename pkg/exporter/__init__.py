# exporter 模块
# 用于计算结果与模拟记录的CSV/JSON导出
