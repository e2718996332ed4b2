# cli 模块
# 用于命令行参数解析与子命令分发
