# visualization 模块
# 用于密钥率曲线的绘制
