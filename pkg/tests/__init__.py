# -*- coding: utf-8 -*-
"""
py-operad 测试包
"""
